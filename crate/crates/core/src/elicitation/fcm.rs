//! Fuzzy c-means on scalar data.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcmConfig {
    /// Fuzzifier exponent, `> 1`.
    pub m: f64,
    /// Stop once no center moves by more than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FcmConfig {
    fn default() -> Self {
        FcmConfig {
            m: 2.0,
            tol: 1e-6,
            max_iter: 500,
        }
    }
}

/// Result of a fuzzy c-means run. Centers are sorted ascending and the
/// membership columns follow the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centers: Vec<f64>,
    /// `memberships[i][j]`: degree of point `i` in cluster `j`. Rows sum to 1.
    pub memberships: Vec<Vec<f64>>,
    /// Objective `sum_i sum_j u_ij^m (x_i - v_j)^2`, one entry per iteration.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Membership column of cluster `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.memberships.iter().map(|row| row[j]).collect()
    }

    /// Fuzzy spread `sqrt(sum_i u_ij^m (x_i - v_j)^2 / sum_i u_ij^m)` of cluster `j`.
    pub fn spread(&self, values: &[f64], j: usize, m: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (x, row) in values.iter().zip(&self.memberships) {
            let w = row[j].powf(m);
            num += w * (x - self.centers[j]).powi(2);
            den += w;
        }
        if den > 0.0 {
            (num / den).sqrt()
        } else {
            0.0
        }
    }
}

/// Memberships of one point given centers. A point that sits on a center
/// belongs to it fully (first such center on ties).
pub fn memberships(x: f64, centers: &[f64], m: f64) -> Vec<f64> {
    let mut row = vec![0.0; centers.len()];
    if let Some(hit) = centers.iter().position(|&v| v == x) {
        row[hit] = 1.0;
        return row;
    }
    let exponent = 2.0 / (m - 1.0);
    let dist: Vec<f64> = centers.iter().map(|v| (x - v).abs()).collect();
    for (j, u) in row.iter_mut().enumerate() {
        let s: f64 = dist.iter().map(|dl| (dist[j] / dl).powf(exponent)).sum();
        *u = 1.0 / s;
    }
    // renormalize so the row sums to 1 up to a single rounding
    let total: f64 = row.iter().sum();
    for u in &mut row {
        *u /= total;
    }
    row
}

fn objective(values: &[f64], centers: &[f64], u: &[Vec<f64>], m: f64) -> f64 {
    values
        .iter()
        .zip(u)
        .map(|(x, row)| {
            row.iter()
                .zip(centers)
                .map(|(uij, v)| uij.powf(m) * (x - v) * (x - v))
                .sum::<f64>()
        })
        .sum()
}

/// Runs fuzzy c-means from the given initial centers; `k = seeds.len()`.
pub fn fcm(values: &[f64], seeds: &[f64], config: &FcmConfig) -> Result<ClusterModel> {
    let k = seeds.len();
    if values.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "cluster count must be at least 1".into(),
        ));
    }
    if k > values.len() {
        return Err(Error::InvalidParameter(format!(
            "cluster count {k} exceeds the number of points {}",
            values.len()
        )));
    }
    if !(config.m > 1.0) || !config.m.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fuzzifier must be > 1, got {}",
            config.m
        )));
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }

    let m = config.m;
    let mut centers = seeds.to_vec();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let u: Vec<Vec<f64>> = values
            .iter()
            .map(|&x| memberships(x, &centers, m))
            .collect();
        history.push(objective(values, &centers, &u, m));

        let mut shift: f64 = 0.0;
        for (j, center) in centers.iter_mut().enumerate() {
            let (mut num, mut den) = (0.0, 0.0);
            for (x, row) in values.iter().zip(&u) {
                let w = row[j].powf(m);
                num += w * x;
                den += w;
            }
            // an empty cluster keeps its position
            if den > 0.0 {
                let next = num / den;
                shift = shift.max((next - *center).abs());
                *center = next;
            }
        }
        if shift < config.tol {
            converged = true;
            break;
        }
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| centers[a].total_cmp(&centers[b]));
    let sorted: Vec<f64> = order.iter().map(|&j| centers[j]).collect();
    let memberships: Vec<Vec<f64>> = values.iter().map(|&x| memberships(x, &sorted, m)).collect();

    Ok(ClusterModel {
        centers: sorted,
        memberships,
        objective: history,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cluster_is_the_mean() {
        let xs = [1.0, 2.0, 4.0, 9.0];
        let model = fcm(&xs, &[0.0], &FcmConfig::default()).unwrap();
        assert!((model.centers[0] - 4.0).abs() < 1e-12);
        assert!(model.memberships.iter().all(|r| r == &[1.0]));
        assert!(model.converged);
    }

    #[test]
    fn point_on_center_belongs_fully() {
        assert_eq!(memberships(3.0, &[1.0, 3.0, 8.0], 2.0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn memberships_follow_inverse_distance() {
        // m = 2: u_j proportional to 1 / d_j^2
        let row = memberships(1.0, &[0.0, 3.0], 2.0);
        assert!((row[0] - 0.8).abs() < 1e-15);
        assert!((row[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = FcmConfig::default();
        assert!(fcm(&[1.0, 2.0], &[0.0, 1.0, 2.0], &cfg).is_err());
        assert!(fcm(&[1.0, 2.0], &[], &cfg).is_err());
        assert!(fcm(&[], &[1.0], &cfg).is_err());
        let bad_m = FcmConfig { m: 1.0, ..cfg };
        assert!(fcm(&[1.0, 2.0], &[1.0], &bad_m).is_err());
    }

    #[test]
    fn centers_come_out_sorted() {
        let xs = [0.0, 0.5, 1.0, 10.0, 10.5, 11.0];
        let model = fcm(&xs, &[10.0, 0.0], &FcmConfig::default()).unwrap();
        assert!(model.centers[0] < model.centers[1]);
        assert!(model.memberships[0][0] > 0.9);
        assert!(model.memberships[5][1] > 0.9);
    }

    #[test]
    fn reports_non_convergence_through_flag() {
        let xs = [0.0, 0.5, 1.0, 10.0, 10.5, 11.0];
        let cfg = FcmConfig {
            max_iter: 1,
            ..Default::default()
        };
        let model = fcm(&xs, &[3.0, 4.0], &cfg).unwrap();
        assert!(!model.converged);
        assert_eq!(model.iterations, 1);
    }
}
