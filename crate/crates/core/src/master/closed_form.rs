//! Closed-form symmetric-subspace fixed points.

use crate::algebra::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{Mat4, C64};

/// Fixed point of the uncontrolled dynamics on the symmetric subspace.
pub fn symmetric_fixed_point(omega: f64) -> DensityMatrix {
    let w = omega;
    let w2 = w * w;
    let w3 = w2 * w;
    let w4 = w2 * w2;
    let den = 12.0 * w4 + 4.0 * w2 + 1.0;
    let re = |x: f64| C64::new(x / den, 0.0);
    let im = |x: f64| C64::new(0.0, x / den);

    let top = im(-2.0 * w3);
    let mid = re(2.0 * w4 + w2);
    let edge = im(-w * (2.0 * w2 + 1.0));
    let corner = re(-2.0 * w2);
    let m = Mat4::new(
        re(4.0 * w4), top, top, corner,
        top.conj(), mid, mid, edge,
        top.conj(), mid, mid, edge,
        corner, edge.conj(), edge.conj(), re(4.0 * w4 + 2.0 * w2 + 1.0),
    );
    DensityMatrix::from_matrix_unchecked(m)
}

/// Polynomial coefficients Υ₁…Υ₇ and the common denominator T of the
/// Markovian-feedback fixed point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackCoefficients {
    pub upsilon: [f64; 7],
    pub denominator: f64,
}

impl FeedbackCoefficients {
    pub fn new(omega: f64, lambda: f64) -> Self {
        let w2 = omega * omega;
        let w4 = w2 * w2;
        let w6 = w4 * w2;
        let l = lambda;
        let l2 = l * l;
        let l4 = l2 * l2;
        let l6 = l4 * l2;
        let l8 = l4 * l4;
        let l10 = l8 * l2;
        let l12 = l6 * l6;

        let u1 = 2.0
            * (32.0 * l12
                + 82.0 * l10
                + l8 * (72.0 * w2 + 65.0)
                + 24.0 * l6 * (4.0 * w2 + 1.0)
                + l4 * (48.0 * w4 + 81.0 * w2 + 4.0)
                + 2.0 * l2 * w2 * (19.0 * w2 + 9.0)
                + 8.0 * (w6 + w4));
        let u2 = 2.0 * l * (2.0 * l2 + 1.0) * omega * (16.0 * l4 + 5.0 * l2 + 4.0 * w2);
        let u3 = -omega
            * (32.0 * l8
                + 90.0 * l6
                + l4 * (40.0 * w2 + 57.0)
                + 10.0 * l2 * (3.0 * w2 + 1.0)
                + 8.0 * (w4 + w2));
        let u4 = -(32.0 * l10
            + 82.0 * l8
            + 5.0 * l6 * (8.0 * w2 + 13.0)
            + 6.0 * l4 * (w2 + 4.0)
            + 4.0 * l2 * (2.0 * w4 + 6.0 * w2 + 1.0)
            + 8.0 * (w4 + w2));
        let u5 = 4.0 * l * w2 * (16.0 * l4 + 5.0 * l2 + 4.0 * w2);
        let u6 = 0.5
            * (64.0 * l12
                + 196.0 * l10
                + 4.0 * l8 * (36.0 * w2 + 53.0)
                + l6 * (232.0 * w2 + 113.0)
                + 8.0 * l4 * (12.0 * w4 + 21.0 * w2 + 4.0)
                + l2 * (84.0 * w4 + 60.0 * w2 + 4.0)
                + 8.0 * (2.0 * w6 + 3.0 * w4 + w2));
        let u7 = -omega
            * (32.0 * l8
                + 74.0 * l6
                + l4 * (40.0 * w2 + 77.0)
                + l2 * (62.0 * w2 + 32.0)
                + 8.0 * w4
                + 12.0 * w2
                + 4.0);
        let t = 192.0 * l12
            + 652.0 * l10
            + 16.0 * l8 * (27.0 * w2 + 52.0)
            + l6 * (776.0 * w2 + 551.0)
            + l4 * (288.0 * w4 + 716.0 * w2 + 209.0)
            + l2 * (268.0 * w4 + 234.0 * w2 + 44.0)
            + 48.0 * w6
            + 64.0 * w4
            + 20.0 * w2
            + 4.0;
        Self { upsilon: [u1, u2, u3, u4, u5, u6, u7], denominator: t }
    }
}

/// Fixed point of the Markovian-feedback dynamics on the symmetric subspace.
pub fn feedback_symmetric_fixed_point(omega: f64, lambda: f64) -> Result<DensityMatrix> {
    let FeedbackCoefficients { upsilon: u, denominator: t } = FeedbackCoefficients::new(omega, lambda);
    // T ≥ 4 for real arguments; only non-finite input can get here
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "feedback denominator T = {t} at (ω, λ) = ({omega}, {lambda})"
        )));
    }
    let z = |re: f64, im: f64| C64::new(re / t, im / t);
    let b = z(u[1], u[2]);
    let d = z(u[3], u[4]);
    let f = z(u[5], 0.0);
    let g = z(0.0, u[6]);
    let m = Mat4::new(
        z(u[0], 0.0), b, b, d,
        b.conj(), f, f, g,
        b.conj(), f, f, g,
        d.conj(), g.conj(), g.conj(), z(t - u[0] - 2.0 * u[5], 0.0),
    );
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
