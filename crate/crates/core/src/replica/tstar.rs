use crate::error::{Error, Result};

/// Smallest listed depth from which `|value − target|` (divided by
/// `|target|` when `relative`) stays `≤ δ` through the end of the curve.
/// `None` when the last point already misses.
pub fn t_star(curve: &[(usize, f64)], target: f64, delta: f64, relative: bool) -> Result<Option<usize>> {
    if curve.is_empty() {
        return Err(Error::Empty("t_star needs a non-empty curve".into()));
    }
    if relative && target == 0.0 {
        return Err(Error::Domain("relative deviation from a zero target".into()));
    }
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::Domain("curve depths must be strictly increasing".into()));
    }
    let scale = if relative { target.abs() } else { 1.0 };
    let mut found = None;
    for &(t, v) in curve.iter().rev() {
        if !((v - target).abs() / scale <= delta) {
            break;
        }
        found = Some(t);
    }
    Ok(found)
}
