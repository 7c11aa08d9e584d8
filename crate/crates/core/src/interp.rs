//! Local Lagrange interpolation on uniform grids.

/// Stencil origin and weights for interpolating at fractional index `u` with
/// `points` consecutive nodes.
///
/// Even stencils straddle the cell containing `u`; odd stencils are centred on
/// the nearest node. Nodes may fall outside the caller's index range; callers
/// treat those as zero samples.
pub fn lagrange_weights(u: f64, points: usize) -> (i64, Vec<f64>) {
    assert!(points >= 1);
    let base = if points % 2 == 0 {
        u.floor() as i64 - (points / 2) as i64 + 1
    } else {
        u.round() as i64 - (points / 2) as i64
    };
    let x = u - base as f64;
    let mut w = vec![0.0; points];
    // exact node hit
    let nearest = x.round();
    if (x - nearest).abs() < 1e-14 && nearest >= 0.0 && (nearest as usize) < points {
        w[nearest as usize] = 1.0;
        return (base, w);
    }
    for (k, wk) in w.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for j in 0..points {
            if j != k {
                num *= x - j as f64;
                den *= k as f64 - j as f64;
            }
        }
        *wk = num / den;
    }
    (base, w)
}
