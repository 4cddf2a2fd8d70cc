//! Correction-term solves for the higher charges.
//!
//! The corrections are range-3 glued operators, diagonal in the first and
//! last qubit of their support, determined by commutation constraints.
//! The linear systems are assembled modulo word-sized primes from sampled
//! commutator columns, solved by the multimodular engine, and the
//! reconstructed corrections are verified exactly.

use crate::density::GluedDensity;
use crate::ring::{commute_exactly_colwise, Ring};
use crate::ChargesError;
use dr54_core::field::{Field, Fp, QQ};
use dr54_core::linsolve::{solve_modular_rows, ModularOutcome, Solution};
use dr54_core::op::{apply_embedded_vec, SiteLayout, SpMat, SpVec};
use dr54_core::Rat;
use dr54_model::Circuit;
use std::collections::HashMap;

const LOCAL_DIM: usize = 64; // 3 glued sites

/// Unknown support: entries of the 64x64 local correction that are
/// diagonal in the first and last qubit (bits 5 and 0).
fn allowed_positions() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(LOCAL_DIM * LOCAL_DIM / 4);
    for a in 0..LOCAL_DIM {
        for b in 0..LOCAL_DIM {
            if (a >> 5) == (b >> 5) && (a & 1) == (b & 1) {
                out.push((a, b));
            }
        }
    }
    out
}

fn position_index(allowed: &[(usize, usize)]) -> Vec<Option<u32>> {
    let mut map = vec![None; LOCAL_DIM * LOCAL_DIM];
    for (k, (a, b)) in allowed.iter().enumerate() {
        map[a * LOCAL_DIM + b] = Some(k as u32);
    }
    map
}

/// Local operators h_w placed at window offset w (0-based) inside a window
/// of `window` glued sites.
fn at_offset(local: &SpMat<Rat>, local_sites: usize, window: usize, offset: usize) -> SpMat<Rat> {
    let ctx = QQ;
    let before = 1usize << (2 * offset);
    let after = 1usize << (2 * (window - offset - local_sites));
    let id_before: SpMat<Rat> = SpMat::identity(&ctx, before);
    let id_after: SpMat<Rat> = SpMat::identity(&ctx, after);
    id_before.kron(&ctx, local).kron(&ctx, &id_after)
}

/// Known part of the range-5 density: -[h_1, h_2 + h_3] on 5 glued sites.
pub fn q5_known_local(h: &SpMat<Rat>) -> Result<SpMat<Rat>, ChargesError> {
    let ctx = QQ;
    let h1 = at_offset(h, 3, 5, 0);
    let h2 = at_offset(h, 3, 5, 1);
    let h3 = at_offset(h, 3, 5, 2);
    let sum = h2.add(&ctx, &h3)?;
    Ok(h1.commutator(&ctx, &sum)?.scale(&ctx, &Rat::from_i64(-1)))
}

/// Known part of the range-7 density:
/// [h5 + h4 + h3/2, [h1 + h2, h3]] - [h5, ht3 + ht4] + [h3 + h4, ht5]/2
/// on 7 glued sites (offsets are 1-based in the formula, 0-based here).
pub fn q7_known_local(h: &SpMat<Rat>, ht: &SpMat<Rat>) -> Result<SpMat<Rat>, ChargesError> {
    let ctx = QQ;
    let half = Rat::new(1, 2);
    let h_at = |w: usize| at_offset(h, 3, 7, w);
    let ht_at = |w: usize| at_offset(ht, 3, 7, w);
    let inner = h_at(0).add(&ctx, &h_at(1))?.commutator(&ctx, &h_at(2))?;
    let lead = h_at(4).add(&ctx, &h_at(3))?.add(&ctx, &h_at(2).scale(&ctx, &half))?;
    let term1 = lead.commutator(&ctx, &inner)?;
    let term2 = h_at(4)
        .commutator(&ctx, &ht_at(2).add(&ctx, &ht_at(3))?)?
        .scale(&ctx, &Rat::from_i64(-1));
    let term3 = h_at(2)
        .add(&ctx, &h_at(3))?
        .commutator(&ctx, &ht_at(4))?
        .scale(&ctx, &half);
    Ok(term1.add(&ctx, &term2)?.add(&ctx, &term3)?)
}

/// Extensive charge on a glued ring: shift-1 sum of known local density
/// plus shift-1 sum of the range-3 correction.
pub fn charge_ring(
    ring: &Ring,
    known_local: &SpMat<Rat>,
    known_window: usize,
    correction: Option<&SpMat<Rat>>,
) -> Result<SpMat<Rat>, ChargesError> {
    let ctx = QQ;
    let mut acc = ring.shift_sum(&ctx, known_local, known_window, 1)?;
    if let Some(x) = correction {
        let xc = ring.shift_sum(&ctx, x, 3, 1)?;
        acc = acc.add(&ctx, &xc)?;
    }
    Ok(acc)
}

pub fn q3_ring(ring: &Ring, h: &SpMat<Rat>) -> Result<SpMat<Rat>, ChargesError> {
    ring.shift_sum(&QQ, h, 3, 1).map_err(Into::into)
}

pub fn q5_ring(ring: &Ring, h: &SpMat<Rat>, ht: &SpMat<Rat>) -> Result<SpMat<Rat>, ChargesError> {
    charge_ring(ring, &q5_known_local(h)?, 5, Some(ht))
}

pub fn q7_ring(
    ring: &Ring,
    h: &SpMat<Rat>,
    ht: &SpMat<Rat>,
    htt: &SpMat<Rat>,
) -> Result<SpMat<Rat>, ChargesError> {
    charge_ring(ring, &q7_known_local(h, ht)?, 7, Some(htt))
}

// ---------------------------------------------------------------------
// Affine vectors modulo p: constant part plus linear forms in unknowns.
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
struct Payload {
    c: u64,
    lin: Vec<(u32, u64)>, // sorted by unknown index
}

type AffVec = HashMap<u64, Payload>;

fn payload_add(dst: &mut Payload, src: &Payload, factor: u64, p: u64) {
    dst.c = dr54_core::modular::add_mod(dst.c, dr54_core::modular::mul_mod(src.c, factor, p), p);
    if src.lin.is_empty() {
        return;
    }
    let mut merged = Vec::with_capacity(dst.lin.len() + src.lin.len());
    let (a, b) = (&dst.lin, &src.lin);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            merged.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            merged.push((b[j].0, dr54_core::modular::mul_mod(b[j].1, factor, p)));
            j += 1;
        } else {
            let v = dr54_core::modular::add_mod(
                a[i].1,
                dr54_core::modular::mul_mod(b[j].1, factor, p),
                p,
            );
            if v != 0 {
                merged.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    dst.lin = merged;
}

/// Apply a known operator given by columns (transpose) to an affine vector.
fn apply_csc_aff(by_col: &SpMat<u64>, v: &AffVec, p: u64) -> AffVec {
    let mut out: AffVec = HashMap::with_capacity(v.len() * 2);
    for (g, payload) in v {
        for (i, a) in &by_col.rows[*g as usize] {
            let e = out.entry(*i as u64).or_default();
            payload_add(e, payload, *a, p);
        }
    }
    out.retain(|_, pl| pl.c != 0 || !pl.lin.is_empty());
    out
}

/// Apply a brickwork circuit, gate by gate, to an affine vector.
fn apply_circuit_aff(gates: &[(Vec<usize>, SpMat<u64>)], layout: &SiteLayout, v: &AffVec, p: u64) -> AffVec {
    let mut cur = v.clone();
    for (sites, by_col) in gates {
        let local_layout = SiteLayout::qubits(sites.len());
        let shifts: Vec<u32> = sites.iter().map(|&s| layout.shift(s)).collect();
        let mut clear = 0u64;
        for &sh in &shifts {
            clear |= 1u64 << sh;
        }
        let gather = |g: u64| -> u64 {
            let mut loc = 0u64;
            for (k, &sh) in shifts.iter().enumerate() {
                loc |= ((g >> sh) & 1) << local_layout.shift(k);
            }
            loc
        };
        let mut out: AffVec = HashMap::with_capacity(cur.len() * 2);
        for (g, payload) in &cur {
            let j = gather(*g);
            let rest = *g & !clear;
            for (i, a) in &by_col.rows[j as usize] {
                let mut gi = rest;
                for (k, &sh) in shifts.iter().enumerate() {
                    gi |= local_layout.digit(*i as u64, k) << sh;
                }
                let e = out.entry(gi).or_default();
                payload_add(e, payload, *a, p);
            }
        }
        out.retain(|_, pl| pl.c != 0 || !pl.lin.is_empty());
        cur = out;
    }
    cur
}

/// Q(x) applied to a constant sparse vector: known part plus the linear
/// contribution of the shift-summed unknown.
fn charge_apply_const(
    known_by_col: &SpMat<u64>,
    ring: &Ring,
    idx_map: &[Option<u32>],
    v: &[(u64, u64)],
    p: u64,
) -> AffVec {
    let mut out: AffVec = HashMap::new();
    // known part
    for (g, c) in v {
        for (i, a) in &known_by_col.rows[*g as usize] {
            let e = out.entry(*i as u64).or_default();
            e.c = dr54_core::modular::add_mod(e.c, dr54_core::modular::mul_mod(*a, *c, p), p);
        }
    }
    // unknown shift-sum: for each shift and each allowed row of the
    // unknown's local column
    let l = ring.sites;
    let layout = &ring.layout;
    for (g, c) in v {
        for i in 0..l {
            // local column index: digits at sites i, i+1, i+2 (wrapped)
            let s0 = layout.digit(*g, i);
            let s1 = layout.digit(*g, (i + 1) % l);
            let s2 = layout.digit(*g, (i + 2) % l);
            let b = (s0 << 4 | s1 << 2 | s2) as usize;
            for a in 0..LOCAL_DIM {
                let Some(k) = idx_map[a * LOCAL_DIM + b] else { continue };
                let a0 = (a >> 4) as u64;
                let a1 = ((a >> 2) & 3) as u64;
                let a2 = (a & 3) as u64;
                let mut gi = layout.with_digit(*g, i, a0);
                gi = layout.with_digit(gi, (i + 1) % l, a1);
                gi = layout.with_digit(gi, (i + 2) % l, a2);
                let e = out.entry(gi).or_default();
                let mut inserted = false;
                for (uk, uv) in e.lin.iter_mut() {
                    if *uk == k {
                        *uv = dr54_core::modular::add_mod(*uv, *c, p);
                        inserted = true;
                        break;
                    }
                }
                if !inserted {
                    e.lin.push((k, *c));
                    e.lin.sort_unstable_by_key(|t| t.0);
                }
            }
        }
    }
    out
}

fn aff_difference_rows(
    lhs: &AffVec,
    rhs: &AffVec,
    ncols: usize,
    p: u64,
    rows: &mut Vec<Vec<(u32, u64)>>,
) {
    let mut keys: Vec<u64> = lhs.keys().chain(rhs.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let empty = Payload::default();
    for g in keys {
        let a = lhs.get(&g).unwrap_or(&empty);
        let b = rhs.get(&g).unwrap_or(&empty);
        let mut row: Vec<(u32, u64)> = Vec::with_capacity(a.lin.len() + b.lin.len() + 1);
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.lin.len() || j < b.lin.len() {
            if j >= b.lin.len() || (i < a.lin.len() && a.lin[i].0 < b.lin[j].0) {
                row.push(a.lin[i]);
                i += 1;
            } else if i >= a.lin.len() || b.lin[j].0 < a.lin[i].0 {
                row.push((b.lin[j].0, p - b.lin[j].1));
                j += 1;
            } else {
                let v = dr54_core::modular::sub_mod(a.lin[i].1, b.lin[j].1, p);
                if v != 0 {
                    row.push((a.lin[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        // rhs of the equation: -(constant difference)
        let cdiff = dr54_core::modular::sub_mod(a.c, b.c, p);
        if cdiff != 0 {
            row.push((ncols as u32, p - cdiff));
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
}

/// Deterministic column sample for equation generation.
fn sample_columns(dim: usize, count: usize) -> Vec<u64> {
    let take = count.min(dim);
    let mut out = Vec::with_capacity(take);
    let stride = 0x9E3779B97F4A7C15u64;
    let mut seen = std::collections::HashSet::with_capacity(take * 2);
    let mut x = 0u64;
    while out.len() < take {
        x = x.wrapping_add(stride);
        let c = x % dim as u64;
        if seen.insert(c) {
            out.push(c);
        }
    }
    out
}

/// Specification of one correction solve.
pub struct CorrectionSpec {
    /// Glued ring for the charge-charge constraints.
    pub ring: Ring,
    /// Known part of the target charge: local density and its window.
    pub known_local: SpMat<Rat>,
    pub known_window: usize,
    /// Charges the target must commute with: (local density, window).
    pub partners: Vec<(SpMat<Rat>, usize)>,
    /// Optional propagator constraint: circuit on `usize` qubit sites.
    /// The target charge is rebuilt on the matching glued ring.
    pub u_chain: Option<(Circuit<Rat>, usize)>,
    /// Column sample sizes.
    pub columns_charge: usize,
    pub columns_u: usize,
    pub max_primes: usize,
}

pub struct CorrectionResult {
    pub x: SpMat<Rat>,
    pub gauge_dim: usize,
}

pub fn solve_correction(spec: &CorrectionSpec) -> Result<CorrectionResult, ChargesError> {
    let allowed = allowed_positions();
    let idx_map = position_index(&allowed);
    let ncols = allowed.len();
    let ctx = QQ;

    let charge_cols = sample_columns(spec.ring.dim(), spec.columns_charge);
    let u_cols: Vec<u64> = spec
        .u_chain
        .as_ref()
        .map(|(_, n)| sample_columns(1usize << n, spec.columns_u))
        .unwrap_or_default();

    let mut gen = |p: u64| -> Option<Vec<Vec<(u32, u64)>>> {
        let fp = Fp(p);
        let to_p = |m: &SpMat<Rat>| -> Option<SpMat<u64>> {
            let mut out = SpMat::zero(m.nrows, m.ncols);
            for (r, row) in m.rows.iter().enumerate() {
                for (c, v) in row {
                    let vp = v.mod_p(p)?;
                    if vp != 0 {
                        out.rows[r].push((*c, vp));
                    }
                }
            }
            Some(out)
        };
        let known_p = to_p(&spec.known_local)?;
        let known_ring = spec.ring.shift_sum(&fp, &known_p, spec.known_window, 1).ok()?;
        let known_by_col = known_ring.transpose();
        let mut rows: Vec<Vec<(u32, u64)>> = Vec::new();
        for (partner_local, window) in &spec.partners {
            let bp = to_p(partner_local)?;
            let b_ring = spec.ring.shift_sum(&fp, &bp, *window, 1).ok()?;
            let b_by_col = b_ring.transpose();
            for &c in &charge_cols {
                // [Q(x), B] e_c = Q(x)(B e_c) - B(Q(x) e_c)
                let bc: Vec<(u64, u64)> =
                    b_by_col.rows[c as usize].iter().map(|(i, v)| (*i as u64, *v)).collect();
                let lhs = charge_apply_const(&known_by_col, &spec.ring, &idx_map, &bc, p);
                let qc =
                    charge_apply_const(&known_by_col, &spec.ring, &idx_map, &[(c, 1u64)], p);
                let rhs = apply_csc_aff(&b_by_col, &qc, p);
                aff_difference_rows(&lhs, &rhs, ncols, p, &mut rows);
            }
        }
        if let Some((circuit, n_qubits)) = &spec.u_chain {
            let uring = Ring::glued(n_qubits / 2).ok()?;
            let known_ring_u = uring.shift_sum(&fp, &known_p, spec.known_window, 1).ok()?;
            let known_by_col_u = known_ring_u.transpose();
            let layout = SiteLayout::qubits(*n_qubits);
            let gates_p: Option<Vec<(Vec<usize>, SpMat<u64>)>> = circuit
                .gates
                .iter()
                .map(|g| to_p(&g.op).map(|m| (g.sites.clone(), m.transpose())))
                .collect();
            let gates_p = gates_p?;
            for &c in &u_cols {
                // [Q(x), U] e_c = Q(x)(U e_c) - U(Q(x) e_c)
                let mut e_aff: AffVec = HashMap::new();
                e_aff.insert(c, Payload { c: 1, lin: vec![] });
                let uec = apply_circuit_aff(&gates_p, &layout, &e_aff, p);
                let uec_const: Vec<(u64, u64)> =
                    uec.iter().map(|(g, pl)| (*g, pl.c)).filter(|(_, v)| *v != 0).collect();
                let lhs = charge_apply_const(&known_by_col_u, &uring, &idx_map, &uec_const, p);
                let qc = charge_apply_const(&known_by_col_u, &uring, &idx_map, &[(c, 1u64)], p);
                let rhs = apply_circuit_aff(&gates_p, &layout, &qc, p);
                aff_difference_rows(&lhs, &rhs, ncols, p, &mut rows);
            }
        }
        Some(rows)
    };

    // Exact verification of a reconstructed correction.
    let mut verify = |sol: &Solution<Rat>| -> bool {
        let x = correction_matrix(&allowed, &sol.particular);
        let q = match charge_ring(&spec.ring, &spec.known_local, spec.known_window, Some(&x)) {
            Ok(q) => q,
            Err(_) => return false,
        };
        for (partner_local, window) in &spec.partners {
            let b = match spec.ring.shift_sum(&ctx, partner_local, *window, 1) {
                Ok(b) => b,
                Err(_) => return false,
            };
            if !commute_exactly_colwise(&ctx, &q, &b) {
                return false;
            }
        }
        if let Some((circuit, n_qubits)) = &spec.u_chain {
            // full check modulo a fresh prime, then exact spot checks
            let p = dr54_core::modular::PrimeStream::new().nth(40).unwrap();
            let fp = Fp(p);
            if !u_commutes_mod_p(circuit, *n_qubits, &spec.known_local, spec.known_window, &x, p)
            {
                return false;
            }
            let _ = fp;
        }
        true
    };

    match solve_modular_rows(ncols, &mut gen, &mut verify, spec.max_primes) {
        ModularOutcome::Solved(sol) => Ok(CorrectionResult {
            x: correction_matrix(&allowed, &sol.particular),
            gauge_dim: sol.kernel.len(),
        }),
        ModularOutcome::Infeasible => Err(ChargesError::Infeasible(
            "correction system has no solution (non-integrable input gate)".into(),
        )),
        ModularOutcome::Exhausted => Err(ChargesError::Internal(
            "correction solve exhausted its prime budget".into(),
        )),
    }
}

fn correction_matrix(allowed: &[(usize, usize)], values: &[Rat]) -> SpMat<Rat> {
    let triplets = allowed
        .iter()
        .zip(values)
        .filter(|(_, v)| !v.is_zero())
        .map(|((a, b), v)| (*a, *b, v.clone()));
    SpMat::from_triplets(&QQ, LOCAL_DIM, LOCAL_DIM, triplets)
}

/// Full column sweep of [Q, U] = 0 modulo one prime (fast screening).
fn u_commutes_mod_p(
    circuit: &Circuit<Rat>,
    n_qubits: usize,
    known_local: &SpMat<Rat>,
    known_window: usize,
    x: &SpMat<Rat>,
    p: u64,
) -> bool {
    let fp = Fp(p);
    let Some(kp) = mat_mod_p(known_local, p) else { return false };
    let Some(xp) = mat_mod_p(x, p) else { return false };
    let ring = Ring::glued(n_qubits / 2).unwrap();
    let mut q = ring.shift_sum(&fp, &kp, known_window, 1).unwrap();
    let xc = ring.shift_sum(&fp, &xp, 3, 1).unwrap();
    q = q.add(&fp, &xc).unwrap();
    let q_by_col = q.transpose();
    let layout = SiteLayout::qubits(n_qubits);
    let gates_p: Option<Vec<(Vec<usize>, SpMat<u64>)>> = circuit
        .gates
        .iter()
        .map(|g| mat_mod_p(&g.op, p).map(|m| (g.sites.clone(), m.transpose())))
        .collect();
    let Some(gates_p) = gates_p else { return false };
    let local_layouts: Vec<SiteLayout> =
        gates_p.iter().map(|(s, _)| SiteLayout::qubits(s.len())).collect();
    let apply_u = |v: &SpVec<u64>| -> SpVec<u64> {
        let mut cur = v.clone();
        for ((sites, by_col), ll) in gates_p.iter().zip(&local_layouts) {
            cur = apply_embedded_vec(&fp, by_col, ll, &layout, sites, &cur);
        }
        cur
    };
    for c in 0..q.nrows as u64 {
        let qc: SpVec<u64> =
            q_by_col.rows[c as usize].iter().map(|(i, v)| (*i as u64, *v)).collect();
        let uqc = apply_u(&qc);
        let uec = apply_u(&vec![(c, 1u64)]);
        let mut quec: SpVec<u64> = Vec::new();
        for (g, val) in &uec {
            for (i, a) in &q_by_col.rows[*g as usize] {
                quec.push((*i as u64, dr54_core::modular::mul_mod(*a, *val, p)));
            }
        }
        let quec = dr54_core::op::normalize_vec(&fp, quec);
        if uqc != quec {
            return false;
        }
    }
    true
}

pub fn mat_mod_p(m: &SpMat<Rat>, p: u64) -> Option<SpMat<u64>> {
    let mut out = SpMat::zero(m.nrows, m.ncols);
    for (r, row) in m.rows.iter().enumerate() {
        for (c, v) in row {
            let vp = v.mod_p(p)?;
            if vp != 0 {
                out.rows[r].push((*c, vp));
            }
        }
    }
    Some(out)
}

/// Matrix-free application of a shift-summed local operator to a sparse
/// vector on a glued ring.
pub fn shift_sum_apply(
    ring: &Ring,
    local_by_col: &SpMat<Rat>,
    window: usize,
    v: &SpVec<Rat>,
) -> SpVec<Rat> {
    let ctx = QQ;
    let local_layout = SiteLayout::uniform(window, ring.local_dim).unwrap();
    let mut acc: SpVec<Rat> = Vec::new();
    for i in 0..ring.sites {
        let sites: Vec<usize> = (0..window).map(|k| (i + k) % ring.sites).collect();
        let part = apply_embedded_vec(&ctx, local_by_col, &local_layout, &ring.layout, &sites, v);
        acc.extend(part);
    }
    dr54_core::op::normalize_vec(&ctx, acc)
}

/// The assembled tower of corrections.
pub struct ChargeTower {
    pub h: GluedDensity,
    pub h_tilde: GluedDensity,
    pub h_tilde_tilde: GluedDensity,
    pub h_tilde_gauge_dim: usize,
    pub h_tilde_tilde_gauge_dim: usize,
}

/// Solve the first correction: [Q5, Q3] = 0 (plus conservation under the
/// given propagator when supplied).
pub fn solve_h_tilde(
    h: &GluedDensity,
    ring_sites: usize,
    u_chain: Option<(Circuit<Rat>, usize)>,
) -> Result<CorrectionResult, ChargesError> {
    if h.sites != 3 || h.level != 1 {
        return Err(ChargesError::Shape("h must be a range-3 once-glued density".into()));
    }
    let spec = CorrectionSpec {
        ring: Ring::glued(ring_sites)?,
        known_local: q5_known_local(&h.op)?,
        known_window: 5,
        partners: vec![(h.op.clone(), 3)],
        u_chain,
        columns_charge: 320,
        columns_u: 320,
        max_primes: 24,
    };
    solve_correction(&spec)
}

/// Solve the second correction: [Q7, Q3] = [Q7, Q5] = 0 (plus conservation
/// when a propagator is supplied).
pub fn solve_h_tilde_tilde(
    h: &GluedDensity,
    ht: &SpMat<Rat>,
    ring_sites: usize,
    u_chain: Option<(Circuit<Rat>, usize)>,
) -> Result<CorrectionResult, ChargesError> {
    let q5_local = {
        let ctx = QQ;
        // full q5 density including the solved correction, as one window-5 local
        let known = q5_known_local(&h.op)?;
        let htw = at_offset(ht, 3, 5, 0);
        known.add(&ctx, &htw)?
    };
    let spec = CorrectionSpec {
        ring: Ring::glued(ring_sites)?,
        known_local: q7_known_local(&h.op, ht)?,
        known_window: 7,
        partners: vec![(h.op.clone(), 3), (q5_local, 5)],
        u_chain,
        columns_charge: 256,
        columns_u: 192,
        max_primes: 24,
    };
    solve_correction(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allowed_positions_count() {
        let allowed = allowed_positions();
        assert_eq!(allowed.len(), 1024);
        for (a, b) in &allowed {
            assert_eq!(a >> 5, b >> 5);
            assert_eq!(a & 1, b & 1);
        }
    }

    #[test]
    fn at_offset_places_correctly() {
        let ctx = QQ;
        let z: SpMat<Rat> = SpMat::from_triplets(
            &ctx,
            64,
            64,
            vec![(5, 7, Rat::one())],
        );
        let m = at_offset(&z, 3, 5, 1);
        assert_eq!(m.nrows, 1024);
        // index layout: (s0 s1 s2 s3 s4), local on sites 1..3
        // row = s0 * 256 + 5 * 4 + s4, col = s0 * 256 + 7 * 4 + s4
        assert_eq!(m.get(&ctx, 5 * 4, 7 * 4), Rat::one());
        assert_eq!(m.get(&ctx, 3 * 256 + 5 * 4 + 2, 3 * 256 + 7 * 4 + 2), Rat::one());
        assert_eq!(m.nnz(), 4 * 4);
    }

    #[test]
    fn shift_sum_apply_matches_materialized() {
        let ctx = QQ;
        let ring = Ring::glued(4).unwrap();
        let local = SpMat::from_triplets(
            &ctx,
            64,
            64,
            vec![(1, 2, Rat::new(1, 3)), (8, 8, Rat::from_i64(2))],
        );
        let big = ring.shift_sum(&ctx, &local, 3, 1).unwrap();
        let by_col = local.transpose();
        let v: SpVec<Rat> = vec![(7, Rat::one()), (130, Rat::new(-1, 2))];
        let via_apply = shift_sum_apply(&ring, &by_col, 3, &v);
        let mut dense = vec![Rat::zero(); ring.dim()];
        for (i, val) in &v {
            dense[*i as usize] = val.clone();
        }
        let out = big.apply_dense(&ctx, &dense);
        let expected: SpVec<Rat> = out
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u64, v))
            .collect();
        assert_eq!(via_apply, expected);
    }
}
