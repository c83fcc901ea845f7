//! Dense row-major kernels. Summation order is fixed so results are
//! bitwise reproducible.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// out = M x for an `out.len()` × `x.len()` matrix.
pub(crate) fn matvec(m: &[f64], x: &[f64], out: &mut [f64]) {
    let cols = x.len();
    debug_assert_eq!(m.len(), cols * out.len());
    for (row, o) in m.chunks_exact(cols).zip(out.iter_mut()) {
        *o = dot(row, x);
    }
}

/// Two products with the same matrix in one sweep over its rows.
pub(crate) fn matvec2(m: &[f64], x: &[f64], y: &[f64], out_x: &mut [f64], out_y: &mut [f64]) {
    let cols = x.len();
    debug_assert_eq!(y.len(), cols);
    for ((row, ox), oy) in m.chunks_exact(cols).zip(out_x.iter_mut()).zip(out_y.iter_mut()) {
        *ox = dot(row, x);
        *oy = dot(row, y);
    }
}
