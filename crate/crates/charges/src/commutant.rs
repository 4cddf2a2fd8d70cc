//! Commutant search: all gauge-fixed densities of a given range whose
//! shift-periodic extensive sum commutes with the propagator.
//!
//! Posed in the computational matrix basis as one linear system in the
//! density entries; the left-aligned gauge enters as linear conditions on
//! the partial trace over the two leftmost sites.

use crate::density::{is_left_aligned, ChargeDensity, Gauge};
use crate::ring::Ring;
use crate::ChargesError;
use dr54_core::field::{Field, Fp, QQ};
use dr54_core::linsolve::{solve_sparse_exact, ExactOutcome, FpEchelon, SparseRow};
use dr54_core::modular::PrimeStream;
use dr54_core::op::SpMat;
use dr54_core::Rat;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
pub struct CommutantQuery {
    pub range: usize,
    pub shift_period: usize,
    pub left_aligned: bool,
}

/// Coefficient rows of [U, sum_i embed(q, i*step)] = 0 plus gauge rows,
/// assembled over any field.
fn assemble_rows<F: Field>(
    ctx: &F,
    u: &SpMat<F::El>,
    ring: &Ring,
    query: &CommutantQuery,
) -> Result<Vec<Vec<(u32, F::El)>>, ChargesError> {
    let r = query.range;
    let d_loc = 1usize << r;
    let nnz_budget = ring.dim();
    let mut rows_map: HashMap<u64, Vec<(u32, F::El)>> = HashMap::new();
    // Per-unknown commutator structure.
    for a in 0..d_loc {
        for b in 0..d_loc {
            let unknown = (a * d_loc + b) as u32;
            let e_ab = SpMat::from_triplets(ctx, d_loc, d_loc, vec![(a, b, ctx.one())]);
            let m = ring.shift_sum(ctx, &e_ab, r, query.shift_period)?;
            let c = u.commutator(ctx, &m)?;
            for (row, cols) in c.rows.iter().enumerate() {
                for (col, v) in cols {
                    let pos = row as u64 * nnz_budget as u64 + *col as u64;
                    rows_map.entry(pos).or_default().push((unknown, v.clone()));
                }
            }
        }
    }
    let mut rows: Vec<(u64, Vec<(u32, F::El)>)> = rows_map.into_iter().collect();
    rows.sort_by_key(|e| e.0);
    let mut out: Vec<Vec<(u32, F::El)>> = rows.into_iter().map(|(_, r)| r).collect();
    if query.left_aligned {
        // tr_{12} q = 0: for every pair (x, y) of states on the trailing
        // sites, sum_a q[(a,x),(a,y)] = 0.
        let d_rest = d_loc >> 2;
        for x in 0..d_rest {
            for y in 0..d_rest {
                let mut row = Vec::with_capacity(4);
                for a in 0..4usize {
                    let i = a * d_rest + x;
                    let j = a * d_rest + y;
                    row.push(((i * d_loc + j) as u32, ctx.one()));
                }
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// Exact commutant basis. Each returned density satisfies the gauge and
/// commutes exactly (verified against U as part of the solve).
pub fn find_commutant(
    u: &SpMat<Rat>,
    n_qubits: usize,
    query: &CommutantQuery,
) -> Result<Vec<ChargeDensity>, ChargesError> {
    if n_qubits < query.range + 2 || n_qubits % 2 != 0 {
        return Err(ChargesError::Shape(format!(
            "chain size {n_qubits} too small for range {} search",
            query.range
        )));
    }
    let ring = Ring::qubits(n_qubits)?;
    let d_loc = 1usize << query.range;
    let rows_rat = assemble_rows(&QQ, u, &ring, query)?;
    let sys: Vec<SparseRow> = rows_rat
        .into_iter()
        .map(|cols| SparseRow { cols, rhs: Rat::zero() })
        .collect();
    let kernel = match solve_sparse_exact(d_loc * d_loc, &sys) {
        ExactOutcome::Solved(sol) => sol.kernel,
        ExactOutcome::Infeasible { .. } => unreachable!("homogeneous system"),
    };
    let mut out = Vec::with_capacity(kernel.len());
    for k in kernel {
        let mut triplets = Vec::new();
        for (idx, v) in k.into_iter().enumerate() {
            if !v.is_zero() {
                triplets.push((idx / d_loc, idx % d_loc, v));
            }
        }
        let q = SpMat::from_triplets(&QQ, d_loc, d_loc, triplets);
        // Exact verification: the extensive sum commutes with U.
        let big = ring.shift_sum(&QQ, &q, query.range, query.shift_period)?;
        if !u.commutator(&QQ, &big)?.is_zero_matrix() {
            return Err(ChargesError::Internal(
                "reconstructed commutant element fails exact verification".into(),
            ));
        }
        if query.left_aligned && !is_left_aligned(&q, query.range) {
            return Err(ChargesError::Internal("gauge constraint violated".into()));
        }
        out.push(ChargeDensity::new(
            q,
            query.range,
            query.shift_period,
            if query.left_aligned { Gauge::LeftAligned } else { Gauge::None },
        )?);
    }
    Ok(out)
}

/// Kernel dimension of the commutant system modulo one large prime.
/// The modular kernel contains the rational one, so a modular dimension
/// equal to the span of known solutions proves there is nothing new.
pub fn commutant_dim_mod_p(
    u: &SpMat<Rat>,
    n_qubits: usize,
    query: &CommutantQuery,
) -> Result<usize, ChargesError> {
    let ring = Ring::qubits(n_qubits)?;
    let d_loc = 1usize << query.range;
    let mut primes = PrimeStream::new();
    let p = primes.next().unwrap();
    let fp = Fp(p);
    let u_p = u.map(|v| v.mod_p(p).expect("parameter denominators coprime to p"));
    let rows = assemble_rows(&fp, &u_p, &ring, query)?;
    let mut ech = FpEchelon::new(p, d_loc * d_loc);
    for (i, row) in rows.iter().enumerate() {
        ech.insert(row, i);
    }
    Ok(d_loc * d_loc - ech.rank())
}

/// Split a commutant basis into diagonal and non-diagonal members.
pub fn split_diagonal(basis: &[ChargeDensity]) -> (Vec<&ChargeDensity>, Vec<&ChargeDensity>) {
    basis.iter().partition(|d| {
        d.op.rows
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().all(|(c, _)| *c as usize == r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dr54_model::{periodic_propagator, ExactWeights};

    fn pinned() -> ExactWeights {
        ExactWeights::new(Rat::new(1, 7), Rat::new(1, 2), Rat::new(1, 8), Rat::new(3, 11))
    }

    #[test]
    fn identity_density_removed_by_gauge() {
        let w = pinned();
        let prop = periodic_propagator(&QQ, &w, 8).unwrap();
        let u = prop.full.materialize(&QQ);
        // range 2, ungauged: the identity is always in the commutant
        let no_gauge = find_commutant(
            &u,
            8,
            &CommutantQuery { range: 2, shift_period: 2, left_aligned: false },
        )
        .unwrap();
        assert!(!no_gauge.is_empty());
        let has_identity_direction = no_gauge.iter().any(|d| {
            let t = d.op.trace(&QQ);
            !t.is_zero()
        });
        assert!(has_identity_direction);
        let gauged = find_commutant(
            &u,
            8,
            &CommutantQuery { range: 2, shift_period: 2, left_aligned: true },
        )
        .unwrap();
        // at range 2 the only left-aligned commutant member is diagonal
        // (soliton-current-like); the identity direction is gone
        for d in &gauged {
            assert!(d.op.trace(&QQ).is_zero());
        }
    }

    #[test]
    fn low_range_commutant_is_diagonal() {
        let w = pinned();
        let prop = periodic_propagator(&QQ, &w, 8).unwrap();
        let u = prop.full.materialize(&QQ);
        for range in [3usize, 4] {
            let basis = find_commutant(
                &u,
                8,
                &CommutantQuery { range, shift_period: 2, left_aligned: true },
            )
            .unwrap();
            let (_diag, nondiag) = split_diagonal(&basis);
            assert!(nondiag.is_empty(), "range {range} has non-diagonal commutant");
        }
    }
}
