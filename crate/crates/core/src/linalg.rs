//! Fixed-size dense routines for 4×4 complex matrices.
//!
//! Everything in this crate is either 4×4 complex or 15×15 real, so the
//! kernels here are written for the fixed size and never allocate.

use nalgebra::Matrix4;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat4 = Matrix4<C64>;

const MAX_QR_ITERATIONS: usize = 400;
const MAX_JACOBI_SWEEPS: usize = 30;

/// Eigenvalues of a general complex 4×4 matrix.
///
/// Householder reduction to upper Hessenberg form followed by single-shift
/// complex QR with Wilkinson shifts and deflation. Returns the eigenvalues
/// in the order they deflate (bottom-up); callers sort if they care.
pub fn eigenvalues(m: &Mat4) -> [C64; 4] {
    let mut h = *m;
    hessenberg_in_place(&mut h);

    let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let mut out = [C64::new(0.0, 0.0); 4];
    let mut hi: usize = 3;
    let mut iter = 0usize;

    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_QR_ITERATIONS {
            // no convergence; return the diagonal as the best available estimate
            for k in 0..=hi {
                out[k] = h[(k, k)];
            }
            break;
        }

        let shift = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        // QR factorization of the active block by Givens rotations
        let mut rots = [(0.0_f64, C64::new(0.0, 0.0)); 3];
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rots[k - lo] = (c, s);
            for j in k..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
        }
        // RQ: apply the adjoint rotations from the right
        for k in lo..hi {
            let (c, s) = rots[k - lo];
            for i in lo..=(k + 1).min(hi) {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    out
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation (c real, s complex) with [c s; -s̄ c]·[a; b] = [r; 0].
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

fn hessenberg_in_place(h: &mut Mat4) {
    for k in 0..2 {
        let mut x = [C64::new(0.0, 0.0); 4];
        let len = 3 - k;
        for i in 0..len {
            x[i] = h[(k + 1 + i, k)];
        }
        let alpha_norm = x[..len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        x[0] += phase * alpha_norm;
        let vnorm2 = x[..len].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- (I - 2vv†/v†v) H (I - 2vv†/v†v)
        for j in 0..4 {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..len {
                dot += x[i].conj() * h[(k + 1 + i, j)];
            }
            let f = dot * (2.0 / vnorm2);
            for i in 0..len {
                h[(k + 1 + i, j)] -= x[i] * f;
            }
        }
        for i in 0..4 {
            let mut dot = C64::new(0.0, 0.0);
            for j in 0..len {
                dot += h[(i, k + 1 + j)] * x[j];
            }
            let f = dot * (2.0 / vnorm2);
            for j in 0..len {
                h[(i, k + 1 + j)] -= f * x[j].conj();
            }
        }
        for i in (k + 2)..4 {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let ev = m.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Factor a positive semidefinite Hermitian matrix as `W W†`.
///
/// Diagonal-pivoted Cholesky; columns whose pivot falls to zero or below are
/// dropped, so a rank-deficient (or slightly indefinite) input yields a
/// factor of lower rank instead of failing. Returns the factor and the most
/// negative pivot encountered (0 when none was negative).
pub fn psd_factor(m: &Mat4) -> (Mat4, f64) {
    let mut a = *m;
    let mut w = Mat4::zeros();
    let mut perm = [0usize, 1, 2, 3];
    let mut most_negative = 0.0_f64;

    for k in 0..4 {
        // choose the largest remaining diagonal
        let mut p = k;
        for i in (k + 1)..4 {
            if a[(perm[i], perm[i])].re > a[(perm[p], perm[p])].re {
                p = i;
            }
        }
        perm.swap(k, p);
        let pk = perm[k];
        let d = a[(pk, pk)].re;
        if d <= 0.0 {
            most_negative = most_negative.min(d);
            break;
        }
        let sd = d.sqrt();
        w[(pk, k)] = C64::new(sd, 0.0);
        for &pi in &perm[(k + 1)..] {
            w[(pi, k)] = a[(pi, pk)] / sd;
        }
        for &pi in &perm[(k + 1)..] {
            for &pj in &perm[(k + 1)..] {
                let upd = w[(pi, k)] * w[(pj, k)].conj();
                a[(pi, pj)] -= upd;
            }
        }
    }
    (w, most_negative)
}

/// Singular values of a complex 4×4 matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal; the singular values are then the column norms. Accurate to
/// working precision in absolute terms, including the small ones.
pub fn singular_values(m: &Mat4) -> [f64; 4] {
    // columns as plain arrays; nalgebra indexing is noticeably slower in this loop
    let mut cols = [[C64::new(0.0, 0.0); 4]; 4];
    for (j, col) in cols.iter_mut().enumerate() {
        for (i, x) in col.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    let mut norms = cols.map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>());
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let (alpha, beta) = (norms[p], norms[q]);
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..4 {
                    gamma += cols[p][i].conj() * cols[q][i];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Reduce to a real symmetric 2×2 problem via the phase of gamma.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..4 {
                    let ap = cols[p][i];
                    let aq = cols[q][i] * phase.conj();
                    cols[p][i] = ap * c - aq * s;
                    cols[q][i] = (ap * s + aq * c) * phase;
                }
                norms[p] = cols[p].iter().map(|z| z.norm_sqr()).sum();
                norms[q] = cols[q].iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = norms.map(f64::sqrt);
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
