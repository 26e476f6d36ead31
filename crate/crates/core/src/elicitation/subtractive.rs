//! Chiu's subtractive clustering for scalar data.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtractiveConfig {
    /// Neighbourhood radius as a fraction of the data range, in `(0, 1]`.
    pub radius: f64,
    /// Squash radius is `squash_factor * radius`.
    pub squash_factor: f64,
    pub accept_ratio: f64,
    pub reject_ratio: f64,
}

impl Default for SubtractiveConfig {
    fn default() -> Self {
        SubtractiveConfig {
            radius: 0.5,
            squash_factor: 1.25,
            accept_ratio: 0.5,
            reject_ratio: 0.15,
        }
    }
}

impl SubtractiveConfig {
    pub fn with_radius(radius: f64) -> Self {
        SubtractiveConfig {
            radius,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be in (0, 1], got {}",
                self.radius
            )));
        }
        if !(self.squash_factor > 0.0) {
            return Err(Error::InvalidParameter(
                "squash factor must be positive".into(),
            ));
        }
        if !(0.0 <= self.reject_ratio
            && self.reject_ratio <= self.accept_ratio
            && self.accept_ratio <= 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= reject ratio ({}) <= accept ratio ({}) <= 1",
                self.reject_ratio, self.accept_ratio
            )));
        }
        Ok(())
    }
}

/// Cluster centers in selection order (highest potential first), in the
/// units of `values`.
///
/// Values are normalized to `[0, 1]` by their own range. Each point's
/// potential is `sum_j exp(-4 |x_i - x_j|^2 / ra^2)`; the best point becomes a
/// center and the potential around it is reduced with radius
/// `rb = squash_factor * ra`, until the accept/reject test stops the search.
pub fn subtractive_clusters(values: &[f64], config: &SubtractiveConfig) -> Result<Vec<f64>> {
    config.validate()?;
    if values.len() < 2 {
        return Err(Error::DatasetTooSmall {
            len: values.len(),
            needed: 2,
        });
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite value {bad}")));
    }

    // Sorting makes the result independent of input order, down to the bit.
    let mut xs = values.to_vec();
    xs.sort_by(f64::total_cmp);
    let (min, max) = (xs[0], xs[xs.len() - 1]);
    let span = max - min;
    if span == 0.0 {
        return Ok(vec![min]);
    }
    let norm: Vec<f64> = xs.iter().map(|x| (x - min) / span).collect();

    let alpha = 4.0 / (config.radius * config.radius);
    let rb = config.squash_factor * config.radius;
    let beta = 4.0 / (rb * rb);

    let mut potential: Vec<f64> = norm
        .iter()
        .map(|xi| {
            norm.iter()
                .map(|xj| (-alpha * (xi - xj) * (xi - xj)).exp())
                .sum()
        })
        .collect();

    let mut centers: Vec<f64> = Vec::new();
    let mut first_potential = None;
    loop {
        // ties go to the smaller value
        let (best, &best_pot) = potential
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty");
        let p1 = *first_potential.get_or_insert(best_pot);
        let candidate = norm[best];

        let accept = if centers.is_empty() || best_pot > config.accept_ratio * p1 {
            true
        } else if best_pot < config.reject_ratio * p1 {
            break;
        } else {
            let d_min = centers
                .iter()
                .map(|c| (candidate - c).abs())
                .fold(f64::INFINITY, f64::min);
            d_min / config.radius + best_pot / p1 >= 1.0
        };

        if accept {
            centers.push(candidate);
            for (p, x) in potential.iter_mut().zip(&norm) {
                *p -= best_pot * (-beta * (x - candidate) * (x - candidate)).exp();
                if *p < 0.0 {
                    *p = 0.0;
                }
            }
        } else {
            potential[best] = 0.0;
        }
        if potential.iter().all(|&p| p <= 0.0) {
            break;
        }
    }
    Ok(centers.into_iter().map(|c| min + c * span).collect())
}
