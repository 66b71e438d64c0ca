//! Scalar functions applied to symmetric matrices through their spectra.

/// A real function of one real variable, with an optional list of points
/// where it is singular (a pole or a jump).
///
/// Any `Fn(f64) -> f64` closure is a `ScalarFunction` with no declared
/// singularities.
pub trait ScalarFunction {
    fn eval(&self, x: f64) -> f64;

    fn singularities(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: Fn(f64) -> f64> ScalarFunction for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// `sign(x − shift)`, with value 0 at the jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sign {
    pub shift: f64,
}

impl Sign {
    pub fn new(shift: f64) -> Self {
        Self { shift }
    }
}

impl ScalarFunction for Sign {
    fn eval(&self, x: f64) -> f64 {
        let y = x - self.shift;
        if y > 0.0 {
            1.0
        } else if y < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    fn singularities(&self) -> Vec<f64> {
        vec![self.shift]
    }
}

/// `1 / x`
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Inverse;

impl ScalarFunction for Inverse {
    fn eval(&self, x: f64) -> f64 {
        1.0 / x
    }

    fn singularities(&self) -> Vec<f64> {
        vec![0.0]
    }
}

/// `1 / x²`
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InverseSquare;

impl ScalarFunction for InverseSquare {
    fn eval(&self, x: f64) -> f64 {
        1.0 / (x * x)
    }

    fn singularities(&self) -> Vec<f64> {
        vec![0.0]
    }
}

/// `1 / (x² + shift)` for `shift > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseShiftedSquare {
    pub shift: f64,
}

impl ScalarFunction for InverseShiftedSquare {
    fn eval(&self, x: f64) -> f64 {
        1.0 / (x * x + self.shift)
    }
}
