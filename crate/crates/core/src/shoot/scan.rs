//! Energy scan of the matching function: adaptive grid, sign changes,
//! subdivision around local minima of |f| (close pairs), and Illinois
//! refinement of every bracket.

use serde::{Deserialize, Serialize};

use super::{EigenvalueEstimate, Shooter};
use crate::error::Result;
use crate::par;

/// Grid points evaluated per window (one parallel batch).
const WINDOW: usize = 24;
/// Levels of 8-fold subdivision around a local minimum of |f|.
const SUBDIVISION_DEPTH: usize = 4;

/// Result of a spectrum computation.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<EigenvalueEstimate>,
    /// Non-fatal problems, e.g. a scan window exhausted before k_max levels.
    pub warnings: Vec<String>,
    /// Lower end of the scan.
    pub floor: f64,
}

impl Spectrum {
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }
}

impl Shooter {
    fn step_at(&self, e: f64) -> f64 {
        self.spec.scan_step * e.abs().max(1.0).powf(self.spacing_exponent())
    }

    /// The lowest `k_max` eigenvalues above the floor.
    pub fn spectrum(&self, k_max: usize) -> Result<Spectrum> {
        let floor = self.spec.e_min.unwrap_or(self.floor);
        let mut out = Spectrum {
            eigenvalues: Vec::new(),
            warnings: Vec::new(),
            floor,
        };
        if k_max == 0 {
            return Ok(out);
        }
        let mut roots: Vec<(f64, [f64; 2], f64)> = Vec::new();
        let mut e = floor;
        while roots.len() < k_max {
            if e > self.spec.e_max {
                out.warnings.push(format!(
                    "scan reached e_max = {} with {} of {} levels",
                    self.spec.e_max,
                    roots.len(),
                    k_max
                ));
                break;
            }
            let mut grid = vec![e];
            for _ in 1..WINDOW {
                let last = *grid.last().unwrap();
                grid.push(last + self.step_at(last));
            }
            let xr = self.xr_for(grid.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            let vals: Vec<f64> = par::map(&grid, self.spec.parallel, |&x| self.mismatch(x, xr))
                .into_iter()
                .collect::<Result<_>>()?;
            let brackets = self.brackets(&grid, &vals, xr)?;
            let refined: Vec<(f64, [f64; 2], f64)> =
                par::map(&brackets, self.spec.parallel, |b| self.refine(*b, xr))
                    .into_iter()
                    .collect::<Result<_>>()?;
            roots.extend(refined);
            e = *grid.last().unwrap();
        }
        roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        roots.dedup_by(|a, b| (a.0 - b.0).abs() <= 10.0 * self.spec.tol * a.0.abs().max(1.0));
        roots.truncate(k_max);
        out.eigenvalues = roots
            .into_iter()
            .enumerate()
            .map(|(level, (value, bracket, residual))| EigenvalueEstimate {
                value,
                bracket,
                residual,
                method: "shooting".into(),
                level,
                precision_bits: 53,
                channel: self.channel_of(value),
            })
            .collect();
        Ok(out)
    }

    /// Sign-change brackets on a grid, subdividing around interior local
    /// minima of |f| that show no sign change.
    fn brackets(&self, grid: &[f64], vals: &[f64], xr: f64) -> Result<Vec<(f64, f64, f64, f64)>> {
        let mut out = Vec::new();
        self.brackets_rec(grid, vals, xr, 0, &mut out)?;
        Ok(out)
    }

    fn brackets_rec(
        &self,
        grid: &[f64],
        vals: &[f64],
        xr: f64,
        depth: usize,
        out: &mut Vec<(f64, f64, f64, f64)>,
    ) -> Result<()> {
        for i in 0..grid.len() - 1 {
            if vals[i] == 0.0 {
                out.push((grid[i], grid[i], 0.0, 0.0));
            } else if vals[i] * vals[i + 1] < 0.0 {
                out.push((grid[i], grid[i + 1], vals[i], vals[i + 1]));
            }
        }
        if depth >= SUBDIVISION_DEPTH {
            return Ok(());
        }
        for i in 1..grid.len() - 1 {
            let (a, b, c) = (vals[i - 1], vals[i], vals[i + 1]);
            let local_min = b.abs() < a.abs() && b.abs() < c.abs();
            if local_min && a * b > 0.0 && b * c > 0.0 {
                let (lo, hi) = (grid[i - 1], grid[i + 1]);
                let sub: Vec<f64> = (0..=8).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect();
                let inner: Vec<f64> = par::map(&sub[1..8], self.spec.parallel, |&x| self.mismatch(x, xr))
                    .into_iter()
                    .collect::<Result<_>>()?;
                let mut sv = vec![a];
                sv.extend(inner);
                sv.push(c);
                self.brackets_rec(&sub, &sv, xr, depth + 1, out)?;
            }
        }
        Ok(())
    }

    /// Illinois (modified regula falsi) refinement of a bracket.
    fn refine(&self, (mut a, mut b, mut fa, mut fb): (f64, f64, f64, f64), xr: f64) -> Result<(f64, [f64; 2], f64)> {
        if a == b {
            return Ok((a, [a, b], 0.0));
        }
        for _ in 0..200 {
            if (b - a).abs() <= self.spec.tol * a.abs().max(b.abs()).max(1.0) {
                break;
            }
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > a.min(b) && c < a.max(b)) {
                c = 0.5 * (a + b);
            }
            let fc = self.mismatch(c, xr)?;
            if fc == 0.0 {
                return Ok((c, [c, c], 0.0));
            }
            if fc * fb < 0.0 {
                a = b;
                fa = fb;
            } else {
                fa *= 0.5;
            }
            b = c;
            fb = fc;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let root = 0.5 * (lo + hi);
        // |f/f′| from a fresh secant at the estimate; the sign change only
        // places the root somewhere in the bracket, so its half-width is a
        // floor on the error
        let delta = (hi - lo).max(1e-7 * root.abs().max(1.0));
        let f0 = self.mismatch(root, xr)?;
        let f1 = self.mismatch(root + delta, xr)?;
        let slope = (f1 - f0) / delta;
        let newton = if slope != 0.0 { (f0 / slope).abs() } else { f64::INFINITY };
        let residual = newton.max(0.5 * (hi - lo));
        Ok((root, [lo, hi], residual))
    }
}
