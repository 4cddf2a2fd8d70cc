//! Brickwork propagators: periodic, boundary-driven, and the comparison
//! six-vertex Markov circuit. A propagator is kept as an ordered list of
//! placed gates (application order) and can be materialized or applied
//! to sparse vectors gate by gate.

use crate::gates;
use crate::weights::{BoundaryDriving, FaceWeights};
use crate::ModelError;
use dr54_core::field::{Field, QQ};
use dr54_core::op::{apply_embedded_vec, embed, normalize_vec, SiteLayout, SpMat, SpVec};
use dr54_core::Rat;

#[derive(Clone, Debug)]
pub struct PlacedGate<T> {
    pub sites: Vec<usize>,
    pub op: SpMat<T>,
}

/// Gates listed in application order: `apply` folds left to right, and
/// `materialize` forms the matching matrix product.
#[derive(Clone, Debug)]
pub struct Circuit<T> {
    pub n_sites: usize,
    pub gates: Vec<PlacedGate<T>>,
}

impl<T: Clone + std::fmt::Debug + PartialEq> Circuit<T> {
    pub fn layout(&self) -> SiteLayout {
        SiteLayout::qubits(self.n_sites)
    }

    pub fn materialize<F: Field<El = T>>(&self, ctx: &F) -> SpMat<T> {
        let layout = self.layout();
        let mut acc: SpMat<T> = SpMat::identity(ctx, layout.dim());
        for g in &self.gates {
            let local_layout = SiteLayout::qubits(g.sites.len());
            debug_assert!(consecutive_mod(&g.sites, self.n_sites));
            let embedded = embed(ctx, &g.op, &local_layout, &layout, g.sites[0])
                .expect("gate placement fits the chain");
            acc = embedded.matmul(ctx, &acc).expect("square product");
        }
        acc
    }

    /// Apply to a sparse vector without materializing the propagator.
    pub fn apply<F: Field<El = T>>(&self, ctx: &F, v: &SpVec<T>) -> SpVec<T> {
        let layout = self.layout();
        let mut cur = normalize_vec(ctx, v.clone());
        for g in &self.gates {
            let local_layout = SiteLayout::qubits(g.sites.len());
            let by_col = g.op.transpose();
            cur = apply_embedded_vec(ctx, &by_col, &local_layout, &layout, &g.sites, &cur);
        }
        cur
    }

    /// Concatenation: self then `later`.
    pub fn then(mut self, later: Circuit<T>) -> Circuit<T> {
        assert_eq!(self.n_sites, later.n_sites);
        self.gates.extend(later.gates);
        self
    }
}

fn consecutive_mod(sites: &[usize], n: usize) -> bool {
    sites.windows(2).all(|w| (w[0] + 1) % n == w[1])
}

/// Even and odd half-step layers plus their product, with the layer order
/// matching the boundary type: U = U_e U_o for periodic chains and
/// U = U_o U_e for open chains.
#[derive(Clone, Debug)]
pub struct Propagator<T> {
    pub u_even: Circuit<T>,
    pub u_odd: Circuit<T>,
    /// Half-step circuits in application order.
    pub full: Circuit<T>,
}

impl<T: Clone + std::fmt::Debug + PartialEq> Propagator<T> {
    pub fn materialize_parts<F: Field<El = T>>(&self, ctx: &F) -> (SpMat<T>, SpMat<T>, SpMat<T>) {
        let e = self.u_even.materialize(ctx);
        let o = self.u_odd.materialize(ctx);
        let u = self.full.materialize(ctx);
        (e, o, u)
    }
}

/// Periodic brickwork: U_e has active (middle) sites on even 1-based
/// positions, U_o on odd ones; U = U_e U_o.
pub fn periodic_propagator<F: Field>(
    ctx: &F,
    w: &FaceWeights<F::El>,
    n: usize,
) -> Result<Propagator<F::El>, ModelError> {
    if n % 2 != 0 || n < 4 {
        return Err(ModelError::BadParameter(format!("N={n} must be even and >= 4")));
    }
    let g = gates::face_gate(ctx, w);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for m in 0..n / 2 {
        even.push(PlacedGate {
            sites: vec![2 * m, (2 * m + 1) % n, (2 * m + 2) % n],
            op: g.clone(),
        });
        odd.push(PlacedGate {
            sites: vec![2 * m + 1, (2 * m + 2) % n, (2 * m + 3) % n],
            op: g.clone(),
        });
    }
    let u_even = Circuit { n_sites: n, gates: even };
    let u_odd = Circuit { n_sites: n, gates: odd };
    let full = u_odd.clone().then(u_even.clone());
    Ok(Propagator { u_even, u_odd, full })
}

/// Boundary-driven stochastic chain: bulk face gates with stochastic
/// weights, conditional-driving baths at the edges; U = U_o U_e.
pub fn open_propagator(
    w: &FaceWeights<Rat>,
    drv: &BoundaryDriving,
    n: usize,
) -> Result<Propagator<Rat>, ModelError> {
    if n % 2 != 0 || n < 4 {
        return Err(ModelError::BadParameter(format!("N={n} must be even and >= 4")));
    }
    if !w.classify().stochastic {
        return Err(ModelError::NonStochastic(
            "open-chain bulk weights must be stochastic".into(),
        ));
    }
    let ctx = QQ;
    let g = gates::face_gate(&ctx, w);
    let mut even = Vec::new();
    // U_e = U_123 U_345 ... U_{N-3,N-2,N-1} U^R_{N-1,N}
    let mut m = 0;
    while 2 * m + 2 <= n - 2 {
        even.push(PlacedGate { sites: vec![2 * m, 2 * m + 1, 2 * m + 2], op: g.clone() });
        m += 1;
    }
    even.push(PlacedGate {
        sites: vec![n - 2, n - 1],
        op: gates::right_boundary_gate(&ctx, &drv.c, &drv.d),
    });
    // U_o = U^L_12 U_234 ... U_{N-2,N-1,N}
    let mut odd = vec![PlacedGate {
        sites: vec![0, 1],
        op: gates::left_boundary_gate(&ctx, &drv.a, &drv.b),
    }];
    let mut m = 0;
    while 2 * m + 3 <= n - 1 {
        odd.push(PlacedGate { sites: vec![2 * m + 1, 2 * m + 2, 2 * m + 3], op: g.clone() });
        m += 1;
    }
    let u_even = Circuit { n_sites: n, gates: even };
    let u_odd = Circuit { n_sites: n, gates: odd };
    let full = u_even.clone().then(u_odd.clone());
    Ok(Propagator { u_even, u_odd, full })
}

/// Boundary-driven six-vertex comparison circuit on 2*n_half + 1 sites.
#[derive(Clone, Debug, PartialEq)]
pub struct SixVertexSpec {
    pub p: Rat,
    pub q: Rat,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub n_half: usize,
}

impl SixVertexSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [("p", &self.p), ("q", &self.q)] {
            if v.is_negative() {
                return Err(ModelError::BadParameter(format!("{name}={v} must be >= 0")));
            }
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            if v.is_negative() || v.is_zero() || *v >= Rat::one() {
                return Err(ModelError::BadParameter(format!("{name}={v} not in (0,1)")));
            }
        }
        if self.n_half < 1 {
            return Err(ModelError::BadParameter("n_half must be >= 1".into()));
        }
        Ok(())
    }
}

/// U = U_e U_o with U_e = U^L_1 U_23(p) ... U_{2N,2N+1}(p) and
/// U_o = U_12(q) ... U_{2N-1,2N}(q) U^R_{2N+1}.
pub fn six_vertex_propagator(s: &SixVertexSpec) -> Result<Propagator<Rat>, ModelError> {
    s.validate()?;
    let ctx = QQ;
    let n = 2 * s.n_half + 1;
    let hop_p = gates::hop_gate(&ctx, &s.p);
    let hop_q = gates::hop_gate(&ctx, &s.q);
    let mut even = vec![PlacedGate {
        sites: vec![0],
        op: gates::site_boundary_gate(&ctx, &s.a, &s.b),
    }];
    for k in 0..s.n_half {
        even.push(PlacedGate { sites: vec![2 * k + 1, 2 * k + 2], op: hop_p.clone() });
    }
    let mut odd = Vec::new();
    for k in 0..s.n_half {
        odd.push(PlacedGate { sites: vec![2 * k, 2 * k + 1], op: hop_q.clone() });
    }
    odd.push(PlacedGate {
        sites: vec![n - 1],
        op: gates::site_boundary_gate(&ctx, &s.c, &s.d),
    });
    let u_even = Circuit { n_sites: n, gates: even };
    let u_odd = Circuit { n_sites: n, gates: odd };
    let full = u_odd.clone().then(u_even.clone());
    Ok(Propagator { u_even, u_odd, full })
}

/// Diagonal soliton-current charge
/// J = sum_j (Z_{2j-1} Z_{2j} - Z_{2j} Z_{2j+1}) with periodic wrap.
pub fn soliton_current_charge(n: usize) -> Result<SpMat<Rat>, ModelError> {
    if n % 2 != 0 || n < 4 {
        return Err(ModelError::BadParameter(format!("N={n} must be even and >= 4")));
    }
    let dim = 1usize << n;
    let mut triplets = Vec::with_capacity(dim);
    for s in 0..dim {
        let z = |site: usize| -> i64 {
            if (s >> (n - 1 - site)) & 1 == 0 {
                1
            } else {
                -1
            }
        };
        let mut total = 0i64;
        for m in 0..n / 2 {
            total += z(2 * m) * z(2 * m + 1) - z(2 * m + 1) * z((2 * m + 2) % n);
        }
        if total != 0 {
            triplets.push((s, s, Rat::from_i64(total)));
        }
    }
    Ok(SpMat::from_triplets(&QQ, dim, dim, triplets))
}

/// Unit column sums, checked exactly.
pub fn is_column_stochastic(m: &SpMat<Rat>) -> bool {
    let mut sums = vec![Rat::zero(); m.ncols];
    let mut nonneg = true;
    for row in &m.rows {
        for (c, v) in row {
            nonneg &= !v.is_negative();
            sums[*c as usize] += v;
        }
    }
    nonneg && sums.iter().all(|s| s.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ExactWeights;

    fn pinned() -> ExactWeights {
        ExactWeights::new(Rat::new(1, 7), Rat::new(1, 2), Rat::new(1, 8), Rat::new(3, 11))
    }

    fn stochastic_w() -> ExactWeights {
        ExactWeights::stochastic(Rat::new(30, 101), Rat::new(40, 49)).unwrap()
    }

    fn driving() -> BoundaryDriving {
        BoundaryDriving::new(
            Rat::new(11, 23),
            Rat::new(19, 32),
            Rat::new(23, 53),
            Rat::new(31, 71),
        )
        .unwrap()
    }

    #[test]
    fn undeformed_periodic_is_permutation() {
        let p = periodic_propagator(&QQ, &ExactWeights::undeformed(), 6).unwrap();
        let (_, _, u) = p.materialize_parts(&QQ);
        // exactly one 1 per column and per row
        let mut col_count = vec![0usize; u.ncols];
        for (r, row) in u.rows.iter().enumerate() {
            assert_eq!(row.len(), 1, "row {r} has {} entries", row.len());
            assert!(row[0].1.is_one());
            col_count[row[0].0 as usize] += 1;
        }
        assert!(col_count.iter().all(|&c| c == 1));
    }

    #[test]
    fn stochastic_periodic_has_unit_column_sums() {
        let p = periodic_propagator(&QQ, &stochastic_w(), 6).unwrap();
        let (e, o, u) = p.materialize_parts(&QQ);
        assert!(is_column_stochastic(&e));
        assert!(is_column_stochastic(&o));
        assert!(is_column_stochastic(&u));
    }

    #[test]
    fn layer_gates_commute() {
        let p = periodic_propagator(&QQ, &pinned(), 8).unwrap();
        let layout = SiteLayout::qubits(8);
        for layer in [&p.u_even, &p.u_odd] {
            let es: Vec<SpMat<Rat>> = layer
                .gates
                .iter()
                .map(|g| {
                    embed(&QQ, &g.op, &SiteLayout::qubits(3), &layout, g.sites[0]).unwrap()
                })
                .collect();
            for i in 0..es.len() {
                for j in i + 1..es.len() {
                    assert!(es[i].commutator(&QQ, &es[j]).unwrap().is_zero_matrix());
                }
            }
        }
    }

    #[test]
    fn soliton_charge_values() {
        let j = soliton_current_charge(4).unwrap();
        // J |0000> = 0
        assert_eq!(j.get(&QQ, 0, 0), Rat::zero());
        // J |1100> = 4 |1100>
        assert_eq!(j.get(&QQ, 0b1100, 0b1100), Rat::from_i64(4));
    }

    #[test]
    fn soliton_charge_commutes_with_periodic_propagator() {
        // random rational quadruple
        let w = ExactWeights::new(Rat::new(2, 5), Rat::new(-1, 3), Rat::new(7, 9), Rat::new(4, 7));
        let p = periodic_propagator(&QQ, &w, 6).unwrap();
        let (_, _, u) = p.materialize_parts(&QQ);
        let j = soliton_current_charge(6).unwrap();
        assert!(u.commutator(&QQ, &j).unwrap().is_zero_matrix());
    }

    #[test]
    fn open_propagator_stochastic_structure() {
        let p = open_propagator(&stochastic_w(), &driving(), 4).unwrap();
        let (e, o, u) = p.materialize_parts(&QQ);
        assert_eq!(u.nrows, 16);
        assert!(is_column_stochastic(&e));
        assert!(is_column_stochastic(&o));
        assert!(is_column_stochastic(&u));
        // U = U_o U_e
        let uo_ue = o.matmul(&QQ, &e).unwrap();
        assert_eq!(u, uo_ue);
    }

    #[test]
    fn open_propagator_rejects_nonstochastic_bulk() {
        assert!(open_propagator(&pinned(), &driving(), 4).is_err());
    }

    #[test]
    fn undeformed_bulk_layers_are_deterministic() {
        let w = ExactWeights::undeformed();
        let p = open_propagator(&w, &driving(), 6).unwrap();
        // strip the boundary gates; the remaining bulk layer entries are 0/1
        for layer in [&p.u_even, &p.u_odd] {
            for g in &layer.gates {
                if g.sites.len() == 3 {
                    for row in &g.op.rows {
                        for (_, v) in row {
                            assert!(v.is_one());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn six_vertex_full_propagator_stochastic() {
        let s = SixVertexSpec {
            p: Rat::new(1, 3),
            q: Rat::new(1, 3),
            a: Rat::new(1, 4),
            b: Rat::new(3, 5),
            c: Rat::new(3, 4),
            d: Rat::new(2, 7),
            n_half: 2,
        };
        let p = six_vertex_propagator(&s).unwrap();
        let (_, _, u) = p.materialize_parts(&QQ);
        assert_eq!(u.nrows, 32);
        assert!(is_column_stochastic(&u));
    }

    #[test]
    fn circuit_apply_matches_materialized() {
        let p = periodic_propagator(&QQ, &pinned(), 6).unwrap();
        let u = p.full.materialize(&QQ);
        let v: SpVec<Rat> = vec![(5, Rat::one()), (17, Rat::new(-2, 3))];
        let via_apply = p.full.apply(&QQ, &v);
        // dense oracle
        let mut dense = vec![Rat::zero(); 64];
        for (i, val) in &v {
            dense[*i as usize] = val.clone();
        }
        let out = u.apply_dense(&QQ, &dense);
        let mut expected: SpVec<Rat> = out
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u64, v))
            .collect();
        expected.sort_by_key(|e| e.0);
        assert_eq!(via_apply, expected);
    }
}
