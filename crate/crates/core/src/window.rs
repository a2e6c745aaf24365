//! Raised-cosine band profiles shared by the filter masks and the spectral fixtures.

/// Profile of the band `[lo, hi]` with raised-cosine transitions of half-width `r` centred
/// on each edge: 1 on `[lo + r, hi - r]`, 1/2 at the edges, 0 outside `[lo - r, hi + r]`.
/// `r = 0` gives the closed indicator.
pub fn band_profile(v: f64, lo: f64, hi: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return if v >= lo && v <= hi { 1.0 } else { 0.0 };
    }
    let rise = edge(v, lo, r);
    let fall = edge(-v, -hi, r);
    rise.min(fall)
}

/// Band `[lo, hi]` kept flat, with transitions of full width `s` extending outward.
pub fn outward_profile(v: f64, lo: f64, hi: f64, s: f64) -> f64 {
    band_profile(v, lo - s / 2.0, hi + s / 2.0, s / 2.0)
}

// rising edge at `at`: 0 below at - r, 1 above at + r
fn edge(v: f64, at: f64, r: f64) -> f64 {
    if v <= at - r {
        0.0
    } else if v >= at + r {
        1.0
    } else {
        0.5 * (1.0 - (std::f64::consts::PI * (v - (at - r)) / (2.0 * r)).cos())
    }
}
