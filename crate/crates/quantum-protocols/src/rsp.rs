use crate::C64;
use nalgebra::DVector;
use std::f64::consts::PI;

/// Measurement bases on the equator of the Bloch sphere, given by azimuths.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorialEnsemble {
    pub angles: Vec<f64>,
}

impl EquatorialEnsemble {
    /// Azimuths `k * pi / n`, the evenly spread choice.
    pub fn symmetric(n: usize) -> Self {
        EquatorialEnsemble { angles: (0..n).map(|k| k as f64 * PI / n as f64).collect() }
    }

    pub fn bases(&self) -> Vec<[DVector<C64>; 2]> {
        self.angles.iter().map(|&t| equatorial_basis(t)).collect()
    }
}

/// `(|0> + e^{i theta}|1>)/sqrt 2` and its antipode.
pub fn equatorial_basis(theta: f64) -> [DVector<C64>; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |phase: f64| DVector::from_vec(vec![C64::new(h, 0.0), C64::from_polar(h, phase)]);
    [v(theta), v(theta + PI)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RspReport {
    pub payoff: f64,
    /// Index pairs whose azimuths agree modulo `pi` (same basis).
    pub duplicates: Vec<(usize, usize)>,
}

fn reduce_pi(t: f64) -> f64 {
    t.rem_euclid(PI)
}

fn duplicates(angles: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            let diff = (reduce_pi(angles[i]) - reduce_pi(angles[j])).abs();
            if diff < 1e-12 || (PI - diff) < 1e-12 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Payoff of sending one of two antipodal equatorial states and measuring
/// in Bob's basis: per basis pair the outcome probabilities are
/// `cos^2(delta/2)` and `sin^2(delta/2)`. Duplicated bases force payoff 0.
pub fn rsp_payoff(angles: &[f64]) -> RspReport {
    let dup = duplicates(angles);
    let mut best = 1.0f64;
    for i in 0..angles.len() {
        for j in 0..angles.len() {
            if i != j {
                let half = (angles[i] - angles[j]) / 2.0;
                best = best.min(half.cos().powi(2)).min(half.sin().powi(2));
            }
        }
    }
    RspReport { payoff: if dup.is_empty() { best } else { 0.0 }, duplicates: dup }
}

/// Same quantity evaluated through Born probabilities of explicit states.
pub fn rsp_payoff_from_states(angles: &[f64]) -> f64 {
    let bases = EquatorialEnsemble { angles: angles.to_vec() }.bases();
    let mut best = 1.0f64;
    for (i, bi) in bases.iter().enumerate() {
        for (j, bj) in bases.iter().enumerate() {
            if i != j {
                for u in bi {
                    for v in bj {
                        best = best.min(u.dotc(v).norm_sqr());
                    }
                }
            }
        }
    }
    best
}
