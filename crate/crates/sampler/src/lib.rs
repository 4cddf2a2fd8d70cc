//! Monte-Carlo sampling of stochastic cellular-automaton trajectories.
//!
//! The stream is counter-based and pinned: trajectory k of a run with seed
//! s draws from ChaCha8 keyed by s on stream k, so parallel and serial
//! sampling produce bitwise identical trajectories on any platform.

use dr54_model::{Boundary, BoundaryDriving, ChainGeometry, ExactWeights, ModelError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mismatched ensembles: {0}")]
    Mismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Initial condition of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    AllZero,
    /// Independent occupation with the given probability.
    Bernoulli(f64),
    /// Zeros outside a centered window of the given width; Bernoulli(1/2)
    /// inside. The window convention is ours, not model ground truth.
    LightCone(usize),
    Explicit(Vec<u8>),
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Time-ordered states, two half-steps per full step; frames[0] is the
    /// initial condition.
    pub frames: Vec<Vec<u8>>,
    pub seed: u64,
    pub weights: ExactWeights,
    pub geometry: ChainGeometry,
}

struct F64Weights {
    // P(new middle = 1 | old middle, both controls empty)
    p1_given_old0: f64, // gamma
    p1_given_old1: f64, // delta
}

/// One half-step layer: which sites update and how.
enum HalfStep {
    /// Bulk face updates on the given active sites (controls are the two
    /// neighbors, periodic wrap).
    Faces { active: Vec<usize> },
    /// Open-chain layer: bulk faces plus one conditional boundary update.
    FacesWithBoundary { active: Vec<usize>, boundary: BoundaryUpdate },
}

enum BoundaryUpdate {
    /// Left bath: site 0 resampled conditioned on site 1; P(empty) = a or b.
    Left { a: f64, b: f64 },
    /// Right bath: last site resampled conditioned on its left neighbor.
    Right { c: f64, d: f64 },
}

fn layers(
    geometry: &ChainGeometry,
    drv: Option<&BoundaryDriving>,
) -> Result<Vec<HalfStep>, SamplerError> {
    let n = geometry.n;
    match geometry.boundary {
        Boundary::Periodic => {
            // U = U_e U_o: odd half-step first. 1-based odd active sites are
            // 0-based even; 1-based even active sites are 0-based odd.
            let odd_active: Vec<usize> = (0..n).filter(|s| s % 2 == 0).collect();
            let even_active: Vec<usize> = (0..n).filter(|s| s % 2 == 1).collect();
            Ok(vec![
                HalfStep::Faces { active: odd_active },
                HalfStep::Faces { active: even_active },
            ])
        }
        Boundary::Open => {
            let drv = drv.ok_or_else(|| {
                SamplerError::Mismatch("open geometry needs boundary driving".into())
            })?;
            // U = U_o U_e: even half-step first. Even layer: 1-based middles
            // 2..N-2 plus the right bath; odd layer: middles 3..N-1 plus the
            // left bath. The bath gate commutes with its layer (shared site
            // is a control on both sides).
            let even_active: Vec<usize> = (1..n - 2).filter(|s| s % 2 == 1).collect();
            let odd_active: Vec<usize> = (2..n - 1).filter(|s| s % 2 == 0).collect();
            Ok(vec![
                HalfStep::FacesWithBoundary {
                    active: even_active,
                    boundary: BoundaryUpdate::Right { c: drv.c.to_f64(), d: drv.d.to_f64() },
                },
                HalfStep::FacesWithBoundary {
                    active: odd_active,
                    boundary: BoundaryUpdate::Left { a: drv.a.to_f64(), b: drv.b.to_f64() },
                },
            ])
        }
    }
}

fn apply_half_step(state: &mut [u8], layer: &HalfStep, w: &F64Weights, rng: &mut impl Rng) {
    let n = state.len();
    let active = match layer {
        HalfStep::Faces { active } => active,
        HalfStep::FacesWithBoundary { active, .. } => active,
    };
    // Controls are diagonal within a layer: all updates read pre-update
    // control values, which the active/frozen split already guarantees.
    let snapshot: Vec<u8> = state.to_vec();
    for &x in active {
        let left = snapshot[(x + n - 1) % n];
        let right = snapshot[(x + 1) % n];
        if left == 0 && right == 0 {
            let p1 = if snapshot[x] == 0 { w.p1_given_old0 } else { w.p1_given_old1 };
            state[x] = (rng.gen::<f64>() < p1) as u8;
        } else {
            state[x] ^= 1;
        }
    }
    if let HalfStep::FacesWithBoundary { boundary, .. } = layer {
        match boundary {
            BoundaryUpdate::Left { a, b } => {
                let p_empty = if snapshot[1] == 0 { *a } else { *b };
                state[0] = (rng.gen::<f64>() >= p_empty) as u8;
            }
            BoundaryUpdate::Right { c, d } => {
                let p_empty = if snapshot[n - 2] == 0 { *c } else { *d };
                state[n - 1] = (rng.gen::<f64>() >= p_empty) as u8;
            }
        }
    }
}

fn draw_initial(init: &InitialCondition, n: usize, rng: &mut impl Rng) -> Vec<u8> {
    match init {
        InitialCondition::AllZero => vec![0; n],
        InitialCondition::Bernoulli(rho) => {
            (0..n).map(|_| (rng.gen::<f64>() < *rho) as u8).collect()
        }
        InitialCondition::LightCone(width) => {
            let mut s = vec![0u8; n];
            let w = (*width).min(n);
            let start = (n - w) / 2;
            for cell in s.iter_mut().skip(start).take(w) {
                *cell = (rng.gen::<f64>() < 0.5) as u8;
            }
            s
        }
        InitialCondition::Explicit(bits) => {
            assert_eq!(bits.len(), n, "explicit initial state length");
            bits.clone()
        }
    }
}

/// RNG for trajectory `index` of a run with the given seed.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_trajectory(
    weights: &ExactWeights,
    drv: Option<&BoundaryDriving>,
    geometry: &ChainGeometry,
    init: &InitialCondition,
    steps: usize,
    seed: u64,
) -> Result<Trajectory, SamplerError> {
    sample_trajectory_indexed(weights, drv, geometry, init, steps, seed, 0)
}

#[allow(clippy::too_many_arguments)]
pub fn sample_trajectory_indexed(
    weights: &ExactWeights,
    drv: Option<&BoundaryDriving>,
    geometry: &ChainGeometry,
    init: &InitialCondition,
    steps: usize,
    seed: u64,
    traj_index: u64,
) -> Result<Trajectory, SamplerError> {
    if !weights.classify().stochastic {
        return Err(SamplerError::Model(ModelError::NonStochastic(
            "sampling needs stochastic face weights".into(),
        )));
    }
    let w = F64Weights {
        p1_given_old0: weights.gamma.to_f64(),
        p1_given_old1: weights.delta.to_f64(),
    };
    let halves = layers(geometry, drv)?;
    let mut rng = trajectory_rng(seed, traj_index);
    let mut state = draw_initial(init, geometry.n, &mut rng);
    let mut frames = Vec::with_capacity(2 * steps + 1);
    frames.push(state.clone());
    for _ in 0..steps {
        for layer in &halves {
            apply_half_step(&mut state, layer, &w, &mut rng);
            frames.push(state.clone());
        }
    }
    Ok(Trajectory { frames, seed, weights: weights.clone(), geometry: geometry.clone() })
}

/// Normalized frequency table of the states at frame index `t`
/// (t counts half-steps; 0 is the initial condition).
pub fn empirical_distribution(
    trajectories: &[Trajectory],
    t: usize,
) -> Result<HashMap<Vec<u8>, f64>, SamplerError> {
    if trajectories.is_empty() {
        return Err(SamplerError::Mismatch("no trajectories".into()));
    }
    let (w0, g0) = (&trajectories[0].weights, &trajectories[0].geometry);
    let mut counts: HashMap<Vec<u8>, usize> = HashMap::new();
    for tr in trajectories {
        if &tr.weights != w0 || &tr.geometry != g0 {
            return Err(SamplerError::Mismatch("trajectories from different models".into()));
        }
        let frame = tr
            .frames
            .get(t)
            .ok_or_else(|| SamplerError::Mismatch(format!("trajectory shorter than t={t}")))?;
        *counts.entry(frame.clone()).or_insert(0) += 1;
    }
    let total = trajectories.len() as f64;
    Ok(counts.into_iter().map(|(k, c)| (k, c as f64 / total)).collect())
}

/// Plain PBM (P1) rendering: one row per half-step, 1 = filled.
pub fn write_pbm<W: Write>(w: &mut W, traj: &Trajectory) -> Result<(), SamplerError> {
    let rows = traj.frames.len();
    let cols = traj.geometry.n;
    writeln!(w, "P1")?;
    writeln!(w, "{cols} {rows}")?;
    for frame in &traj.frames {
        let line: Vec<&str> = frame.iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Basis index of a bit-string, site 0 most significant.
pub fn state_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dr54_core::field::QQ;
    use dr54_core::Rat;
    use dr54_model::{open_propagator, periodic_propagator};

    fn stochastic_w() -> ExactWeights {
        ExactWeights::stochastic(Rat::new(30, 101), Rat::new(40, 49)).unwrap()
    }

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let w = stochastic_w();
        let g = ChainGeometry::new(8, Boundary::Periodic).unwrap();
        let t1 = sample_trajectory(&w, None, &g, &InitialCondition::LightCone(4), 10, 42).unwrap();
        let t2 = sample_trajectory(&w, None, &g, &InitialCondition::LightCone(4), 10, 42).unwrap();
        assert_eq!(t1.frames, t2.frames);
        let t3 = sample_trajectory(&w, None, &g, &InitialCondition::LightCone(4), 10, 43).unwrap();
        assert_ne!(t1.frames, t3.frames);
    }

    #[test]
    fn absorbing_zero_state_stays() {
        // alpha = 1 (gamma = 0): f_00 fixes |0>, all-zero is absorbing.
        let w = ExactWeights::stochastic(Rat::new(1, 3), Rat::zero()).unwrap();
        let g = ChainGeometry::new(6, Boundary::Periodic).unwrap();
        let t = sample_trajectory(&w, None, &g, &InitialCondition::AllZero, 5, 7).unwrap();
        assert!(t.frames.iter().all(|f| f.iter().all(|&b| b == 0)));
    }

    #[test]
    fn gamma_one_fills_active_sublattice() {
        // gamma = 1: |000> -> |010> with probability 1. The first periodic
        // half-step updates 0-based even sites.
        let w = ExactWeights::stochastic(Rat::new(1, 2), Rat::one()).unwrap();
        let g = ChainGeometry::new(6, Boundary::Periodic).unwrap();
        let t = sample_trajectory(&w, None, &g, &InitialCondition::AllZero, 1, 3).unwrap();
        for (s, &b) in t.frames[1].iter().enumerate() {
            assert_eq!(b, (s % 2 == 0) as u8, "site {s}");
        }
    }

    #[test]
    fn frames_differ_only_on_active_sublattice() {
        let w = stochastic_w();
        let g = ChainGeometry::new(8, Boundary::Periodic).unwrap();
        let t = sample_trajectory(&w, None, &g, &InitialCondition::Bernoulli(0.5), 6, 11).unwrap();
        for (k, pair) in t.frames.windows(2).enumerate() {
            let updated_parity = if k % 2 == 0 { 0 } else { 1 };
            for s in 0..8 {
                if s % 2 != updated_parity {
                    assert_eq!(pair[0][s], pair[1][s], "frozen site {s} changed at half-step {k}");
                }
            }
        }
    }

    #[test]
    fn deterministic_point_reproduces_rca54_rule() {
        let w = ExactWeights::undeformed();
        let g = ChainGeometry::new(8, Boundary::Periodic).unwrap();
        let init = vec![0, 0, 1, 0, 0, 1, 1, 0];
        let t = sample_trajectory(&w, None, &g, &InitialCondition::Explicit(init.clone()), 3, 0)
            .unwrap();
        // oracle: middle flips iff a neighbor is 1, applied per sublattice
        let mut state = init;
        for (k, frame) in t.frames.iter().skip(1).enumerate() {
            let parity = if k % 2 == 0 { 0 } else { 1 };
            let snapshot = state.clone();
            for s in 0..8 {
                if s % 2 == parity {
                    let l = snapshot[(s + 7) % 8];
                    let r = snapshot[(s + 1) % 8];
                    if l == 1 || r == 1 {
                        state[s] ^= 1;
                    }
                }
            }
            assert_eq!(&state, frame, "half-step {k}");
        }
    }

    /// Wilson-Hilferty approximation of the chi-square 99% quantile.
    fn chi2_crit_99(df: f64) -> f64 {
        let z = 2.3263478740408408; // Phi^{-1}(0.99)
        df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3)
    }

    #[test]
    fn one_step_distribution_matches_exact_propagator_column() {
        let w = stochastic_w();
        let g = ChainGeometry::new(6, Boundary::Periodic).unwrap();
        let n_samples = 20_000usize;
        let trajectories: Vec<Trajectory> = (0..n_samples)
            .map(|k| {
                sample_trajectory_indexed(
                    &w,
                    None,
                    &g,
                    &InitialCondition::AllZero,
                    1,
                    12345,
                    k as u64,
                )
                .unwrap()
            })
            .collect();
        let hist = empirical_distribution(&trajectories, 2).unwrap();

        let prop = periodic_propagator(&QQ, &w, 6).unwrap();
        let u = prop.full.materialize(&QQ);
        let mut expected = vec![0f64; 64];
        for (r, row) in u.rows.iter().enumerate() {
            for (c, v) in row {
                if *c == 0 {
                    expected[r] = v.to_f64();
                }
            }
        }
        // chi-square against the exact column, pooling tiny cells
        let mut chi2 = 0.0;
        let mut df = 0.0;
        for (idx, &p) in expected.iter().enumerate() {
            let e = p * n_samples as f64;
            if e < 5.0 {
                continue;
            }
            let mut bits = vec![0u8; 6];
            for (s, bit) in bits.iter_mut().enumerate() {
                *bit = ((idx >> (5 - s)) & 1) as u8;
            }
            let obs = hist.get(&bits).copied().unwrap_or(0.0) * n_samples as f64;
            chi2 += (obs - e) * (obs - e) / e;
            df += 1.0;
        }
        assert!(df > 3.0);
        assert!(chi2 < chi2_crit_99(df - 1.0), "chi2 = {chi2}, df = {df}");
        // total-variation distance against the exact column
        let mut tv = 0.0;
        for (idx, &p) in expected.iter().enumerate() {
            let mut bits = vec![0u8; 6];
            for (s, bit) in bits.iter_mut().enumerate() {
                *bit = ((idx >> (5 - s)) & 1) as u8;
            }
            tv += (hist.get(&bits).copied().unwrap_or(0.0) - p).abs();
        }
        assert!(tv / 2.0 < 0.02, "TV distance {tv}");
    }

    #[test]
    fn open_chain_sampling_matches_exact_column() {
        let w = stochastic_w();
        let drv = BoundaryDriving::new(
            Rat::new(11, 23),
            Rat::new(19, 32),
            Rat::new(23, 53),
            Rat::new(31, 71),
        )
        .unwrap();
        let g = ChainGeometry::new(4, Boundary::Open).unwrap();
        let n_samples = 20_000usize;
        let init = vec![0u8, 1, 1, 0];
        let trajectories: Vec<Trajectory> = (0..n_samples)
            .map(|k| {
                sample_trajectory_indexed(
                    &w,
                    Some(&drv),
                    &g,
                    &InitialCondition::Explicit(init.clone()),
                    1,
                    999,
                    k as u64,
                )
                .unwrap()
            })
            .collect();
        let hist = empirical_distribution(&trajectories, 2).unwrap();
        let prop = open_propagator(&w, &drv, 4).unwrap();
        let u = prop.full.materialize(&QQ);
        let col = state_index(&init) as usize;
        let mut tv = 0.0;
        for idx in 0..16usize {
            let p = u.get(&QQ, idx, col).to_f64();
            let mut bits = vec![0u8; 4];
            for (s, bit) in bits.iter_mut().enumerate() {
                *bit = ((idx >> (3 - s)) & 1) as u8;
            }
            tv += (hist.get(&bits).copied().unwrap_or(0.0) - p).abs();
        }
        assert!(tv / 2.0 < 0.03, "TV distance {tv}");
    }

    #[test]
    fn single_trajectory_is_point_mass() {
        let w = stochastic_w();
        let g = ChainGeometry::new(6, Boundary::Periodic).unwrap();
        let t = sample_trajectory(&w, None, &g, &InitialCondition::AllZero, 2, 5).unwrap();
        let hist = empirical_distribution(&[t], 1).unwrap();
        assert_eq!(hist.len(), 1);
        assert!(hist.values().all(|&v| v == 1.0));
    }

    #[test]
    fn pbm_output_shape() {
        let w = stochastic_w();
        let g = ChainGeometry::new(6, Boundary::Periodic).unwrap();
        let t = sample_trajectory(&w, None, &g, &InitialCondition::LightCone(2), 2, 1).unwrap();
        let mut buf = Vec::new();
        write_pbm(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P1"));
        assert_eq!(lines.next(), Some("6 5"));
        assert_eq!(lines.count(), 5);
    }
}
