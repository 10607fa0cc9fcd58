use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::stability::StabilityFunction;

/// Largest raster side length.
pub const MAX_RASTER_SIDE: usize = 4096;
/// Rays are scanned on `(0, THRESHOLD_RAY_LIMIT]`.
pub const THRESHOLD_RAY_LIMIT: f64 = 200.0;
pub const THRESHOLD_SCAN_STEP: f64 = 1e-2;
pub const THRESHOLD_TOL: f64 = 1e-6;

/// Rectangle `[re_min, re_max] x [im_min, im_max]` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min < im_max;
        if !ok {
            return Err(Error::InvalidParams(format!(
                "window [{re_min}, {re_max}] x [{im_min}, {im_max}] is empty or not finite"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }
}

/// Cell-centred samples of `|R|` over a window. Row 0 is the top edge
/// (largest imaginary part), column 0 the left edge.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRaster {
    window: Window,
    width: usize,
    height: usize,
    /// `|R|` per cell, `f64::INFINITY` at poles.
    magnitude: Vec<f64>,
}

impl StabilityRaster {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn center(&self, row: usize, col: usize) -> Complex<f64> {
        let w = &self.window;
        let dx = (w.re_max - w.re_min) / self.width as f64;
        let dy = (w.im_max - w.im_min) / self.height as f64;
        Complex::new(w.re_min + (col as f64 + 0.5) * dx, w.im_max - (row as f64 + 0.5) * dy)
    }

    pub fn magnitude(&self, row: usize, col: usize) -> f64 {
        self.magnitude[row * self.width + col]
    }

    /// `|R| < 1` at the cell centre.
    pub fn is_stable(&self, row: usize, col: usize) -> bool {
        self.magnitude(row, col) < 1.0
    }

    /// Cells whose centre lies in the open left half-plane and are unstable.
    pub fn unstable_in_left_half_plane(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                if self.center(row, col).re < 0.0 && !self.is_stable(row, col) {
                    out.push((row, col));
                }
            }
        }
        out
    }

    pub fn stable_count(&self) -> usize {
        self.magnitude.iter().filter(|&&m| m < 1.0).count()
    }

    /// Plain PGM (P2): stable cells grey, unstable cells white.
    pub fn to_pgm(&self) -> String {
        let mut s = String::with_capacity(self.width * self.height * 4 + 64);
        let _ = writeln!(s, "P2");
        let _ = writeln!(
            s,
            "# |R(z)| < 1 in grey; re [{}, {}], im [{}, {}]",
            self.window.re_min, self.window.re_max, self.window.im_min, self.window.im_max
        );
        let _ = writeln!(s, "{} {}", self.width, self.height);
        let _ = writeln!(s, "255");
        for row in 0..self.height {
            let line: Vec<&str> = (0..self.width)
                .map(|col| if self.is_stable(row, col) { "128" } else { "255" })
                .collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

pub fn stability_region_raster<S: StabilityFunction<f64> + ?Sized>(
    r: &S,
    window: Window,
    width: usize,
    height: usize,
) -> Result<StabilityRaster> {
    for side in [width, height] {
        if side == 0 || side > MAX_RASTER_SIDE {
            return Err(Error::InvalidParams(format!(
                "raster resolution must be between 1 and {MAX_RASTER_SIDE} per side, got {width}x{height}"
            )));
        }
    }
    let mut raster = StabilityRaster { window, width, height, magnitude: Vec::with_capacity(width * height) };
    for row in 0..height {
        for col in 0..width {
            let z = raster.center(row, col);
            let m = match r.abs(z) {
                Ok(v) if v.is_finite() => v,
                Ok(_) | Err(Error::PoleAt { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            raster.magnitude.push(m);
        }
    }
    Ok(raster)
}

/// `(r, |R(r e^{i angle})|)` for `r = step, 2 step, ..., <= r_max`. Poles
/// are reported as infinite magnitude.
pub fn sample_ray<S: StabilityFunction<f64> + ?Sized>(r: &S, angle: f64, r_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) || !(r_max > 0.0) {
        return Err(Error::InvalidParams("ray sampling needs positive step and length".into()));
    }
    let dir = Complex::from_polar(1.0, angle);
    let n = (r_max / step + 1e-9).floor() as usize;
    (1..=n)
        .map(|k| {
            let rho = k as f64 * step;
            match r.abs(dir * rho) {
                Ok(v) => Ok((rho, v)),
                Err(Error::PoleAt { .. }) => Ok((rho, f64::INFINITY)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// First point `z* < 0` on the negative real axis with `|R(z*)| = 1`, found by
/// a scan at [`THRESHOLD_SCAN_STEP`] followed by bisection to
/// [`THRESHOLD_TOL`].
pub fn find_stability_threshold<S: StabilityFunction<f64> + ?Sized>(r: &S) -> Result<f64> {
    let g = |rho: f64| -> Result<f64> {
        match r.abs(Complex::new(-rho, 0.0)) {
            Ok(v) if v.is_finite() => Ok(v - 1.0),
            Ok(_) | Err(Error::PoleAt { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let n = (THRESHOLD_RAY_LIMIT / THRESHOLD_SCAN_STEP).round() as usize;
    let mut lo = 0.0;
    for k in 1..=n {
        let rho = k as f64 * THRESHOLD_SCAN_STEP;
        if g(rho)? >= 0.0 {
            let mut hi = rho;
            while hi - lo > THRESHOLD_TOL {
                let mid = 0.5 * (lo + hi);
                if g(mid)? >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(-0.5 * (lo + hi));
        }
        lo = rho;
    }
    Err(Error::NoCrossing { limit: THRESHOLD_RAY_LIMIT })
}

/// Largest stable step for eigenvalue `lambda` given a threshold `z*`.
pub fn time_step_bound(z_star: f64, lambda: Complex<f64>) -> f64 {
    z_star.abs() / lambda.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::RationalStabilityFunction;

    fn implicit_euler() -> RationalStabilityFunction<f64> {
        RationalStabilityFunction::from_coeffs(vec![1.0], vec![1.0, -1.0]).unwrap()
    }

    fn explicit_euler() -> RationalStabilityFunction<f64> {
        RationalStabilityFunction::from_coeffs(vec![1.0, 1.0], vec![1.0]).unwrap()
    }

    #[test]
    fn explicit_euler_threshold_is_minus_two() {
        let z = find_stability_threshold(&explicit_euler()).unwrap();
        assert!((z + 2.0).abs() <= THRESHOLD_TOL);
        assert!((time_step_bound(z, Complex::new(-50.0, 0.0)) - 0.04).abs() < 1e-7);
    }

    #[test]
    fn implicit_euler_never_crosses() {
        assert!(matches!(find_stability_threshold(&implicit_euler()), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn raster_geometry_and_pgm() {
        let w = Window::new(-3.0, 1.0, -2.0, 2.0).unwrap();
        let r = stability_region_raster(&explicit_euler(), w, 8, 4).unwrap();
        assert_eq!(r.center(0, 0), Complex::new(-2.75, 1.5));
        // Disk |1 + z| < 1 contains the cell centred at -1 +- 0.5i.
        assert!(r.is_stable(1, 3) && r.is_stable(2, 3));
        assert!(!r.is_stable(0, 7));
        let pgm = r.to_pgm();
        assert!(pgm.starts_with("P2\n"));
        assert_eq!(pgm.lines().count(), 4 + 4);
        assert!(!r.unstable_in_left_half_plane().is_empty());
    }

    #[test]
    fn poles_are_unstable() {
        let w = Window::new(0.5, 1.5, -0.5, 0.5).unwrap();
        let r = stability_region_raster(&implicit_euler(), w, 1, 1).unwrap();
        assert!(!r.is_stable(0, 0));
        assert!(stability_region_raster(&implicit_euler(), w, 0, 3).is_err());
        assert!(Window::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ray_samples() {
        let s = sample_ray(&implicit_euler(), std::f64::consts::PI, 1.0, 0.25).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s[3].1 - 0.5).abs() < 1e-15);
    }
}
