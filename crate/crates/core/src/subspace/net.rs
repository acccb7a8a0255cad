use nalgebra::DVector;

use crate::error::{Error, Result};

/// Grid points `h m` (`m` integer, `h = ε/sqrt(L)`) with `‖h m‖ < r + ε/2`.
///
/// Every point of the radius-`r` ball lies within `ε/2` of its nearest grid
/// point, and that grid point has norm below `r + ε/2`, so the emitted set is
/// an `ε`-net of the ball.
#[derive(Debug, Clone)]
pub struct NetIter {
    dim: usize,
    spacing: f64,
    /// `((r + ε/2) / h)²`, the squared radius in grid units.
    limit: f64,
    coords: Vec<i64>,
    /// `Σ_{j<i} m_j²` for each level `i`.
    partial: Vec<i64>,
    done: bool,
}

impl NetIter {
    pub fn new(dim: usize, radius: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && radius >= 0.0) {
            return Err(Error::InvalidParams(format!("need epsilon > 0 and radius >= 0, got {epsilon}, {radius}")));
        }
        let spacing = epsilon / (dim.max(1) as f64).sqrt();
        let reach = (radius + epsilon / 2.0) / spacing;
        let mut it = NetIter {
            dim,
            spacing,
            limit: reach * reach,
            coords: vec![0; dim],
            partial: vec![0; dim + 1],
            done: false,
        };
        it.reset_from(0);
        Ok(it)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Upper bound on the number of points: the bounding box of the grid.
    pub fn box_count(&self) -> f64 {
        let m = self.limit.sqrt().floor();
        (2.0 * m + 1.0).powi(self.dim as i32)
    }

    fn bound(&self, level: usize) -> i64 {
        let rem = self.limit - self.partial[level] as f64;
        if rem <= 0.0 {
            0
        } else {
            rem.sqrt().floor() as i64
        }
    }

    fn reset_from(&mut self, level: usize) {
        for i in level..self.dim {
            let b = self.bound(i);
            self.coords[i] = -b;
            self.partial[i + 1] = self.partial[i] + b * b;
        }
    }

    fn advance(&mut self) {
        for i in (0..self.dim).rev() {
            if self.coords[i] < self.bound(i) {
                self.coords[i] += 1;
                let m = self.coords[i];
                self.partial[i + 1] = self.partial[i] + m * m;
                self.reset_from(i + 1);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for NetIter {
    type Item = DVector<f64>;

    fn next(&mut self) -> Option<DVector<f64>> {
        while !self.done {
            let inside = (self.partial[self.dim] as f64) < self.limit;
            let point = DVector::from_iterator(self.dim, self.coords.iter().map(|&m| m as f64 * self.spacing));
            if self.dim == 0 {
                self.done = true;
            } else {
                self.advance();
            }
            if inside {
                return Some(point);
            }
        }
        None
    }
}

/// Exact net size, or `NetCapExceeded` once it passes `cap`.
pub fn net_size(dim: usize, radius: f64, epsilon: f64, cap: usize) -> Result<usize> {
    let it = NetIter::new(dim, radius, epsilon)?;
    if it.box_count() <= cap as f64 {
        return Ok(it.count());
    }
    // ball volume in grid units as the reported requirement
    let reach = it.limit.sqrt();
    let l = dim as f64;
    let log_ball = l / 2.0 * std::f64::consts::PI.ln() - libm::lgamma(l / 2.0 + 1.0) + l * reach.ln();
    let count = it.take(cap + 1).count();
    if count > cap {
        return Err(Error::NetCapExceeded {
            required: log_ball.exp().max((cap + 1) as f64),
            cap,
        });
    }
    Ok(count)
}
