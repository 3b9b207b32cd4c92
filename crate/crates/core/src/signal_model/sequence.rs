//! Fortescue symmetrical components.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The rotation operator `e^{j 2 pi / 3}`.
pub const ALPHA: Complex64 = Complex64 {
    re: -0.5,
    im: 0.866_025_403_784_438_6,
};

/// Positive, negative and zero sequence phasors at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequencePhasors {
    pub positive: Complex64,
    pub negative: Complex64,
    pub zero: Complex64,
}

impl SequencePhasors {
    /// Per-phase phasors `(V_a, V_b, V_c)` rebuilt from the sequence set.
    pub fn reconstruct(&self) -> [Complex64; 3] {
        let a2 = ALPHA * ALPHA;
        [
            self.zero + self.positive + self.negative,
            self.zero + a2 * self.positive + ALPHA * self.negative,
            self.zero + ALPHA * self.positive + a2 * self.negative,
        ]
    }
}

pub fn sequence_phasors(abc: [Complex64; 3]) -> Result<SequencePhasors> {
    if let Some(index) = abc
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::NonFinite { index });
    }
    let [a, b, c] = abc;
    let a2 = ALPHA * ALPHA;
    Ok(SequencePhasors {
        positive: (a + ALPHA * b + a2 * c) / 3.0,
        negative: (a + a2 * b + ALPHA * c) / 3.0,
        zero: (a + b + c) / 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn pure_positive_sequence() {
        let one = Complex64::new(1.0, 0.0);
        let s = sequence_phasors([one, ALPHA * ALPHA, ALPHA]).unwrap();
        assert!(close(s.positive, one));
        assert!(close(s.negative, Complex64::default()));
        assert!(close(s.zero, Complex64::default()));
    }

    #[test]
    fn pure_zero_sequence() {
        let one = Complex64::new(1.0, 0.0);
        let s = sequence_phasors([one; 3]).unwrap();
        assert!(close(s.positive, Complex64::default()));
        assert!(close(s.negative, Complex64::default()));
        assert!(close(s.zero, one));
    }

    #[test]
    fn non_finite_rejected() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            sequence_phasors([one, Complex64::new(f64::NAN, 0.0), one]),
            Err(Error::NonFinite { index: 1 })
        );
    }

    #[test]
    fn alpha_is_cube_root_of_unity() {
        assert!(close(ALPHA * ALPHA * ALPHA, Complex64::new(1.0, 0.0)));
        assert!(close(
            ALPHA,
            Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0)
        ));
    }
}
