//! Dense Gaussian elimination with partial pivoting, shared by the real
//! Newton solver and the complex path tracker.

use num_traits::NumAssign;

use crate::Scalar;

/// Solves `a · x = b` in place (`a` row-major `n × n`, `b` length `n`).
///
/// Returns `None` when a pivot falls below `rel_pivot_floor` times the
/// largest entry of `a`, which is how callers detect a singular matrix.
pub(crate) fn solve_in_place<E, T>(
    a: &mut [E],
    b: &mut [E],
    n: usize,
    modulus: impl Fn(&E) -> T,
    rel_pivot_floor: T,
) -> Option<()>
where
    E: Copy + NumAssign,
    T: Scalar,
{
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().map(&modulus).fold(T::zero(), T::max);
    if !(scale > T::zero()) || !scale.is_finite() {
        return None;
    }
    let floor = scale * rel_pivot_floor;

    for col in 0..n {
        let (piv, piv_mod) = (col..n)
            .map(|r| (r, modulus(&a[r * n + col])))
            .fold((col, T::neg_infinity()), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if !(piv_mod > floor) {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
            let bv = b[col];
            b[r] -= f * bv;
        }
    }

    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * b[k];
        }
        b[row] = acc / a[row * n + row];
    }
    Some(())
}

pub(crate) fn inf_norm<E, T: Scalar>(v: &[E], modulus: impl Fn(&E) -> T) -> T {
    v.iter().map(modulus).fold(T::zero(), T::max)
}
