//! Golden-section maximization of unimodal functions.

use crate::ext::ExtReal;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a concave (hence unimodal) `f` on `[lo, hi]` to within `tol` in
/// the argument. The endpoints are evaluated explicitly so that boundary
/// maxima are found exactly.
pub(crate) fn golden_max(f: impl Fn(f64) -> ExtReal, lo: f64, hi: f64, tol: f64) -> (f64, ExtReal) {
    let (f_lo, f_hi) = (f(lo), f(hi));
    let mut best = if f_lo >= f_hi { (lo, f_lo) } else { (hi, f_hi) };
    if hi - lo <= tol {
        return best;
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm > best.1 {
        best = (mid, fm);
    }
    best
}
