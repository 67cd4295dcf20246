//! The vertex algebra structure on the vacuum module and its action on
//! truncated modules: mode matrices of Y(v, x), opposite and contragredient
//! operators, Jacobi coefficient checks, and C₁ quotients.
//!
//! Modes are built recursively from the iterate formula
//!
//!   Y(a(−n₀)u, x) = Res_{x₁} (x₁−x)^{−n₀} Y(a,x₁) Y(u,x)
//!                 − Res_{x₁} (−x+x₁)^{−n₀} Y(u,x) Y(a,x₁)
//!
//! whose two expansion directions give, in components,
//!
//!   (a(−n₀)u)_n = Σ_{i≥0} (−1)^i C(−n₀,i)
//!                 [ a(−n₀−i) u_{n+i}  −  (−1)^{n₀} u_{n−n₀−i} a(i) ].
//!
//! Mode matrices are materialized lazily per (state, mode); the memo table
//! is idempotent and safe under concurrent readers.

use crate::affine::{GradedModule, WindowVec};
use crate::error::{Error, Result};
use crate::linalg::{row_space_rref, SparseVec};
use crate::scalar::{binomial, Scalar};
use crate::sugawara::{sugawara_operator, VirasoroOperator};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Mode calculus for states of the vacuum module `v` acting on the module
/// `w` (take `w = v` for the adjoint action).
pub struct VoaContext {
    pub v: Arc<GradedModule>,
    pub w: Arc<GradedModule>,
    pub kappa: Scalar,
    /// L(1) on the vacuum module, for opposite operators.
    l1: VirasoroOperator,
    memo: Mutex<BTreeMap<(usize, usize, i64, usize, usize), WindowVec>>,
}

impl VoaContext {
    pub fn new(v: Arc<GradedModule>, w: Arc<GradedModule>, kappa: Scalar) -> Result<Self> {
        if v.piece_dim(0) != 1 {
            return Err(Error::InvalidInput(
                "states must live in a vacuum module with one-dimensional bottom".into(),
            ));
        }
        let l1 = sugawara_operator(&v, &kappa, 1)?;
        Ok(VoaContext {
            v,
            w,
            kappa,
            l1,
            memo: Mutex::new(BTreeMap::new()),
        })
    }

    /// Zero bound: u_m kills every vector of depth <= d once
    /// m >= wt(u) + len(u)·(d + spill) + 1.
    fn mode_zero_bound(&self, state_depth: usize, state_len: usize, d: usize) -> i64 {
        let j = self.w.max_lowest_mode();
        state_depth as i64 + state_len as i64 * (d as i64 + j) + 1
    }

    /// v_n applied to one basis vector of the target module, memoized.
    fn mono_mode_apply(
        &self,
        dv: usize,
        iv: usize,
        n: i64,
        d: usize,
        i: usize,
    ) -> Result<WindowVec> {
        if dv == 0 {
            // vacuum: Y(1, x) = id
            return Ok(if n == -1 {
                WindowVec::basis_vector(d, i)
            } else {
                WindowVec::new()
            });
        }
        let key = (dv, iv, n, d, i);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mono = &self.v.pieces[dv][iv];
        let (lead_mode, lead_basis) = mono.factors[0];
        let n0 = -lead_mode; // n0 >= 1
        let tail = crate::affine::PBWMonomial {
            factors: mono.factors[1..].to_vec(),
            lowest: mono.lowest,
        };
        let (du, iu) = self
            .v
            .monomial_index(&tail)
            .expect("tail of a canonical monomial is canonical");
        let tail_len = tail.factors.len();
        let spill = self.w.max_lowest_mode();

        let mut acc = WindowVec::new();
        // first expansion: a(−n0−i) u_{n+i}
        let stop = self.mode_zero_bound(du, tail_len, d);
        let mut i_bin: i64 = 0;
        while n + i_bin < stop {
            let coef = binomial(-n0, i_bin as u64);
            if !coef.is_zero() {
                let inner = self.mono_mode_apply(du, iu, n + i_bin, d, i)?;
                if !inner.is_zero() {
                    let outer = self.w.act(lead_basis, -n0 - i_bin, &inner)?;
                    let sign = if i_bin % 2 == 0 {
                        Scalar::one()
                    } else {
                        Scalar::from_int(-1)
                    };
                    acc.add_scaled(&outer, &(sign * coef));
                }
            }
            i_bin += 1;
        }
        // second expansion: −(−1)^{n0} u_{n−n0−i} a(i)
        let outer_sign = if n0 % 2 == 0 {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        };
        for i_bin in 0..=(d as i64 + spill) {
            let coef = binomial(-n0, i_bin as u64);
            if coef.is_zero() {
                continue;
            }
            let aw = self
                .w
                .act_basis(lead_basis, i_bin, d, i)?;
            if aw.is_zero() {
                continue;
            }
            let inner = self.mono_mode_on_vec(du, iu, n - n0 - i_bin, &aw)?;
            if inner.is_zero() {
                continue;
            }
            let sign = if i_bin % 2 == 0 {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            };
            acc.add_scaled(&inner, &(outer_sign.clone() * sign * coef));
        }
        self.memo.lock().unwrap().entry(key).or_insert(acc.clone());
        Ok(acc)
    }

    fn mono_mode_on_vec(&self, dv: usize, iv: usize, n: i64, target: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (d, comp) in &target.comps {
            for (i, c) in &comp.entries {
                let img = self.mono_mode_apply(dv, iv, n, *d, *i)?;
                out.add_scaled(&img, c);
            }
        }
        Ok(out)
    }

    /// v_n applied to a window vector of the target module, for a state
    /// given as a window vector of the vacuum module.
    pub fn state_mode_apply(&self, state: &WindowVec, n: i64, target: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (dv, comp) in &state.comps {
            for (iv, c) in &comp.entries {
                let mut img = WindowVec::new();
                for (d, tcomp) in &target.comps {
                    for (i, tc) in &tcomp.entries {
                        let part = self.mono_mode_apply(*dv, *iv, n, *d, *i)?;
                        img.add_scaled(&part, tc);
                    }
                }
                out.add_scaled(&img, c);
            }
        }
        Ok(out)
    }

    /// L(1)^k applied to a state of the vacuum module.
    fn l1_power(&self, state: &WindowVec, k: usize) -> Result<WindowVec> {
        let mut s = state.clone();
        for _ in 0..k {
            s = self.l1.apply(&s)?;
        }
        Ok(s)
    }

    /// Opposite mode: Y^o(v, x) = Y(e^{xL(1)} (−x⁻²)^{L(0)} v, x⁻¹), so for
    /// v homogeneous of weight h,
    ///   Y^o(v)_m = Σ_k (−1)^h / k! · (L(1)^k v)_{2h−2−k−m}.
    /// Non-homogeneous states are decomposed first.
    pub fn opposite_mode_apply(&self, state: &WindowVec, m: i64, target: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (h, comp) in state.comps.clone() {
            let part = WindowVec::single(h, comp);
            let sign = if h % 2 == 0 {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            };
            let mut factorial = Scalar::one();
            for k in 0..=h {
                if k > 0 {
                    factorial = factorial * Scalar::from_int(k as i64);
                }
                let lv = self.l1_power(&part, k)?;
                if lv.is_zero() {
                    continue;
                }
                let mode = 2 * h as i64 - 2 - k as i64 - m;
                let img = self.state_mode_apply(&lv, mode, target)?;
                let coef = sign.clone().div(&factorial)?;
                out.add_scaled(&img, &coef);
            }
        }
        Ok(out)
    }

    /// The conformal element ω = (1/2κ) Σ_i u_i(−1) u^i(−1) 1.
    pub fn conformal_element(&self) -> Result<WindowVec> {
        let (primal, dual) = self.v.algebra.dual_bases()?;
        let vac = WindowVec::basis_vector(0, 0);
        let mut omega = WindowVec::new();
        for i in 0..primal.len() {
            let inner = self.v.act_element(&dual[i], -1, &vac)?;
            let outer = self.v.act_element(&primal[i], -1, &inner)?;
            omega.add_scaled(&outer, &Scalar::one());
        }
        let half = Scalar::one().div(&(Scalar::from_int(2) * self.kappa.clone()))?;
        omega.scale(&half);
        Ok(omega)
    }
}

/// Mode matrices of Y(v, x) on the target module for a requested mode
/// range; per mode and source depth, columns are absent when the image
/// leaves the window.
pub struct VertexOperatorSlice {
    pub modes: BTreeMap<i64, Vec<Option<Vec<WindowVec>>>>,
}

pub fn vertex_operator(
    ctx: &VoaContext,
    state: &WindowVec,
    n_min: i64,
    n_max: i64,
) -> Result<VertexOperatorSlice> {
    let mut modes = BTreeMap::new();
    let wt = state.max_depth().unwrap_or(0) as i64;
    for n in n_min..=n_max {
        let mut per_depth = Vec::new();
        for d in 0..=ctx.w.depth_cap {
            // the image lands at d + wt − n − 1 for homogeneous states
            if d as i64 + wt - n - 1 > ctx.w.depth_cap as i64 {
                per_depth.push(None);
                continue;
            }
            let mut cols = Vec::with_capacity(ctx.w.piece_dim(d));
            let mut ok = true;
            for i in 0..ctx.w.piece_dim(d) {
                match ctx.state_mode_apply(state, n, &WindowVec::basis_vector(d, i)) {
                    Ok(col) => cols.push(col),
                    Err(Error::OutOfWindow(_)) => {
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            per_depth.push(if ok { Some(cols) } else { None });
        }
        modes.insert(n, per_depth);
    }
    Ok(VertexOperatorSlice { modes })
}

/// Mode matrices of the opposite operator Y^o(v, x).
pub fn opposite_vertex_operator(
    ctx: &VoaContext,
    state: &WindowVec,
    m_min: i64,
    m_max: i64,
) -> Result<VertexOperatorSlice> {
    let mut modes = BTreeMap::new();
    for m in m_min..=m_max {
        let mut per_depth = Vec::new();
        for d in 0..=ctx.w.depth_cap {
            let mut cols = Vec::with_capacity(ctx.w.piece_dim(d));
            let mut ok = true;
            for i in 0..ctx.w.piece_dim(d) {
                match ctx.opposite_mode_apply(state, m, &WindowVec::basis_vector(d, i)) {
                    Ok(col) => cols.push(col),
                    Err(Error::OutOfWindow(_)) => {
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            per_depth.push(if ok { Some(cols) } else { None });
        }
        modes.insert(m, per_depth);
    }
    Ok(VertexOperatorSlice { modes })
}

/// Contragredient action on D(W): ⟨Y'(v,x)w', w⟩ = ⟨w', Y^o(v,x)w⟩, i.e.
/// the transpose of the opposite mode matrices against the graded pairing.
/// Returns per mode n and per D(W)-source-depth the columns.
pub fn contragredient_action(
    ctx: &VoaContext,
    state: &WindowVec,
    n_min: i64,
    n_max: i64,
) -> Result<VertexOperatorSlice> {
    let mut modes = BTreeMap::new();
    for n in n_min..=n_max {
        let mut per_depth: Vec<Option<Vec<WindowVec>>> = Vec::new();
        for dprime in 0..=ctx.w.depth_cap {
            let mut cols: Vec<WindowVec> = vec![WindowVec::new(); ctx.w.piece_dim(dprime)];
            let mut ok = true;
            // ⟨Y'_n λ_(dprime,i), w_(d,j)⟩ = ⟨λ, Y^o_n w⟩ requires the
            // Y^o-image component at depth dprime
            for d in 0..=ctx.w.depth_cap {
                for j in 0..ctx.w.piece_dim(d) {
                    let img = match ctx.opposite_mode_apply(
                        state,
                        n,
                        &WindowVec::basis_vector(d, j),
                    ) {
                        Ok(x) => x,
                        Err(Error::OutOfWindow(_)) => {
                            ok = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    };
                    let comp = img.component(dprime);
                    for (i, c) in &comp.entries {
                        let entry = cols[*i].comps.entry(d).or_default();
                        let v = entry.get(j) + c.clone();
                        entry.set(j, v);
                    }
                }
                if !ok {
                    break;
                }
            }
            for col in cols.iter_mut() {
                col.comps.retain(|_, v| !v.is_zero());
            }
            per_depth.push(if ok { Some(cols) } else { None });
        }
        modes.insert(n, per_depth);
    }
    Ok(VertexOperatorSlice { modes })
}

/// Coefficient-box check of the Jacobi identity for two states acting on a
/// window vector: for all (p, q, r) in the box,
///
///   Σ_i (−1)^i C(p,i) [ u_{p+q−i} v_{r+i} − (−1)^p v_{p+r−i} u_{q+i} ] w
///   = Σ_i C(q,i) (u_{p+i} v)_{q+r−i} w.
///
/// Out-of-window coefficients are skipped and counted.
pub fn check_jacobi(
    ctx_w: &VoaContext,
    ctx_v: &VoaContext,
    u: &WindowVec,
    v: &WindowVec,
    target: &WindowVec,
    box_bound: i64,
) -> Result<(bool, usize)> {
    let mut skipped = 0usize;
    for p in -box_bound..=box_bound {
        for q in -box_bound..=box_bound {
            for r in -box_bound..=box_bound {
                match jacobi_coefficient(ctx_w, ctx_v, u, v, target, p, q, r) {
                    Ok(diff) => {
                        if !diff.is_zero() {
                            return Ok((false, skipped));
                        }
                    }
                    Err(Error::OutOfWindow(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((true, skipped))
}

fn jacobi_coefficient(
    ctx_w: &VoaContext,
    ctx_v: &VoaContext,
    u: &WindowVec,
    v: &WindowVec,
    target: &WindowVec,
    p: i64,
    q: i64,
    r: i64,
) -> Result<WindowVec> {
    let d = target.max_depth().unwrap_or(0);
    let wt_u = u.max_depth().unwrap_or(0) as i64;
    let wt_v = v.max_depth().unwrap_or(0) as i64;
    let spill = ctx_w.w.max_lowest_mode();
    let mut lhs = WindowVec::new();
    // i bounded by annihilation of the inner factor
    let i_top = (d as i64 + spill + wt_u.max(wt_v) + p.abs() + q.abs() + r.abs() + 2).max(0);
    for i in 0..=i_top {
        let c = binomial(p, i as u64);
        if c.is_zero() {
            continue;
        }
        let sign = if i % 2 == 0 {
            Scalar::one()
        } else {
            Scalar::from_int(-1)
        };
        let inner1 = ctx_w.state_mode_apply(v, r + i, target)?;
        if !inner1.is_zero() {
            let t1 = ctx_w.state_mode_apply(u, p + q - i, &inner1)?;
            lhs.add_scaled(&t1, &(sign.clone() * c.clone()));
        }
        let inner2 = ctx_w.state_mode_apply(u, q + i, target)?;
        if !inner2.is_zero() {
            let t2 = ctx_w.state_mode_apply(v, p + r - i, &inner2)?;
            let psign = if p % 2 == 0 {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            };
            lhs.add_scaled(&t2, &(-(sign * psign * c)));
        }
    }
    let mut rhs = WindowVec::new();
    for i in 0..=i_top {
        let c = binomial(q, i as u64);
        if c.is_zero() {
            continue;
        }
        let uv = ctx_v.state_mode_apply(u, p + i, v)?;
        if uv.is_zero() {
            continue;
        }
        let t = ctx_w.state_mode_apply(&uv, q + r - i, target)?;
        rhs.add_scaled(&t, &c);
    }
    lhs.add_scaled(&rhs, &Scalar::from_int(-1));
    Ok(lhs)
}

/// Dimension of W_{≤D} / C₁-span, where the span is generated by u_{−1} w
/// for positive-weight states u and window vectors w.
pub struct C1Report {
    /// Quotient dimension per depth.
    pub per_depth: Vec<usize>,
    pub total: usize,
    /// Quotient total at cap D−1, for the stabilization flag.
    pub total_at_previous: usize,
    pub stabilized: bool,
}

pub fn c1_quotient_dimension(ctx: &VoaContext, cap: usize) -> Result<C1Report> {
    if cap < 2 {
        return Err(Error::InvalidInput(
            "C1 quotient needs depth >= 2 to populate positive-weight states".into(),
        ));
    }
    if cap > ctx.w.depth_cap || cap > ctx.v.depth_cap {
        return Err(Error::OutOfWindow("C1 cap exceeds module windows".into()));
    }
    let per_depth = c1_ranks(ctx, cap)?;
    let prev = c1_ranks(ctx, cap - 1)?;
    let total: usize = per_depth.iter().sum();
    let total_prev: usize = prev.iter().sum();
    Ok(C1Report {
        stabilized: total == total_prev,
        per_depth,
        total,
        total_at_previous: total_prev,
    })
}

fn c1_ranks(ctx: &VoaContext, cap: usize) -> Result<Vec<usize>> {
    let mut quotients = Vec::with_capacity(cap + 1);
    for d in 0..=cap {
        let mut rows: Vec<SparseVec> = Vec::new();
        for du in 1..=d.min(cap) {
            for iu in 0..ctx.v.piece_dim(du) {
                let state = WindowVec::basis_vector(du, iu);
                let dw = d - du;
                if dw > cap - 1 && d == cap {
                    // w restricted to depth <= cap-1 per the definition of
                    // the windowed span
                    continue;
                }
                for iw in 0..ctx.w.piece_dim(dw) {
                    let img =
                        ctx.state_mode_apply(&state, -1, &WindowVec::basis_vector(dw, iw))?;
                    let comp = img.component(d);
                    if !comp.is_zero() {
                        rows.push(comp);
                    }
                }
            }
        }
        let rank = row_space_rref(&rows, ctx.w.piece_dim(d)).len();
        quotients.push(ctx.w.piece_dim(d) - rank);
    }
    Ok(quotients)
}

/// Membership of a vector's depth-d component in the C₁-span at that depth
/// (plus the lowest piece at depth 0).
pub fn in_c1_span(ctx: &VoaContext, vec: &WindowVec, depth: usize, cap: usize) -> Result<bool> {
    let mut rows: Vec<SparseVec> = Vec::new();
    for du in 1..=depth {
        for iu in 0..ctx.v.piece_dim(du) {
            let state = WindowVec::basis_vector(du, iu);
            let dw = depth - du;
            if dw >= cap {
                continue;
            }
            for iw in 0..ctx.w.piece_dim(dw) {
                let img = ctx.state_mode_apply(&state, -1, &WindowVec::basis_vector(dw, iw))?;
                let comp = img.component(depth);
                if !comp.is_zero() {
                    rows.push(comp);
                }
            }
        }
    }
    let basis = row_space_rref(&rows, ctx.w.piece_dim(depth));
    Ok(crate::linalg::in_row_space(&basis, &vec.component(depth)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{induce, LowestSpace};
    use crate::liealg::{build_sl, highest_weight_module, WeightModule};

    fn vacuum_ctx(kappa: i64, cap: usize) -> VoaContext {
        let g = Arc::new(build_sl(2).unwrap());
        let v = Arc::new(
            induce(
                g.clone(),
                LowestSpace::plain(WeightModule::trivial(&g)),
                Scalar::from_int(kappa),
                cap,
            )
            .unwrap(),
        );
        VoaContext::new(v.clone(), v, Scalar::from_int(kappa)).unwrap()
    }

    fn generator_state(ctx: &VoaContext, basis: usize) -> WindowVec {
        ctx.v
            .act(basis, -1, &WindowVec::basis_vector(0, 0))
            .unwrap()
    }

    #[test]
    fn vacuum_state_is_identity() {
        let ctx = vacuum_ctx(-1, 2);
        let vac = WindowVec::basis_vector(0, 0);
        for d in 0..=2usize {
            for i in 0..ctx.w.piece_dim(d) {
                let t = WindowVec::basis_vector(d, i);
                assert_eq!(ctx.state_mode_apply(&vac, -1, &t).unwrap(), t);
                assert!(ctx.state_mode_apply(&vac, 0, &t).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn generator_modes_are_affine_modes() {
        let ctx = vacuum_ctx(-1, 3);
        for basis in 0..3usize {
            let state = generator_state(&ctx, basis);
            for n in -2..=2i64 {
                for d in 0..=2usize {
                    if d as i64 - n > 3 {
                        continue;
                    }
                    for i in 0..ctx.w.piece_dim(d) {
                        let t = WindowVec::basis_vector(d, i);
                        let lhs = ctx.state_mode_apply(&state, n, &t).unwrap();
                        let rhs = ctx.w.act(basis, n, &t).unwrap();
                        assert_eq!(lhs, rhs, "basis {basis} mode {n} depth {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn creation_property() {
        // Y(v, x) 1 has only nonnegative powers and constant term v:
        // v_{-1} 1 = v and v_n 1 = 0 for n >= 0.
        let ctx = vacuum_ctx(-1, 3);
        let vac = WindowVec::basis_vector(0, 0);
        for dv in 0..=3usize {
            for iv in 0..ctx.v.piece_dim(dv) {
                let state = WindowVec::basis_vector(dv, iv);
                let created = ctx.state_mode_apply(&state, -1, &vac).unwrap();
                assert_eq!(created, state, "creation fails at depth {dv}");
                for n in 0..=3i64 {
                    assert!(
                        ctx.state_mode_apply(&state, n, &vac).unwrap().is_zero(),
                        "positive mode {n} on vacuum"
                    );
                }
            }
        }
    }

    #[test]
    fn l_minus_one_derivative_property() {
        // (L(−1)v)_n = −n v_{n−1}
        let ctx = vacuum_ctx(-1, 3);
        let kappa = Scalar::from_int(-1);
        let lm1 = sugawara_operator(&ctx.v, &kappa, -1).unwrap();
        for dv in 0..=1usize {
            for iv in 0..ctx.v.piece_dim(dv) {
                let state = WindowVec::basis_vector(dv, iv);
                let lv = lm1.apply(&state).unwrap();
                for n in -2..=2i64 {
                    for d in 0..=1usize {
                        // both sides land at d + (dv+1) - n - 1
                        if d as i64 + dv as i64 - n > 3 {
                            continue;
                        }
                        for i in 0..ctx.w.piece_dim(d) {
                            let t = WindowVec::basis_vector(d, i);
                            let lhs = ctx.state_mode_apply(&lv, n, &t).unwrap();
                            let mut rhs = ctx.state_mode_apply(&state, n - 1, &t).unwrap();
                            rhs.scale(&Scalar::from_int(-n));
                            assert_eq!(lhs, rhs, "derivative fails state {dv},{iv} mode {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn second_descendant_matches_derivative() {
        // Y(a(−2)1, x) = d/dx Y(a(−1)1, x) in modes:
        // (a(−2)1)_n = −n a(n−1) … with the L(−1)-derivative convention
        // (L(−1) a(−1)1 = a(−2)1).
        let ctx = vacuum_ctx(-1, 3);
        let kappa = Scalar::from_int(-1);
        let lm1 = sugawara_operator(&ctx.v, &kappa, -1).unwrap();
        let a = generator_state(&ctx, 0);
        let a2 = lm1.apply(&a).unwrap(); // = a(−2)1
        let direct = ctx.v.act(0, -2, &WindowVec::basis_vector(0, 0)).unwrap();
        assert_eq!(a2, direct);
        for n in -1..=2i64 {
            for d in 0..=2usize {
                if d as i64 - (n - 1) > 3 {
                    continue;
                }
                for i in 0..ctx.w.piece_dim(d) {
                    let t = WindowVec::basis_vector(d, i);
                    let lhs = ctx.state_mode_apply(&a2, n, &t).unwrap();
                    let mut rhs = ctx.w.act(0, n - 1, &t).unwrap();
                    rhs.scale(&Scalar::from_int(-n));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn conformal_element_modes_match_sugawara() {
        let ctx = vacuum_ctx(-1, 3);
        let kappa = Scalar::from_int(-1);
        let omega = ctx.conformal_element().unwrap();
        // L(0) ω = 2 ω
        let l0 = sugawara_operator(&ctx.v, &kappa, 0).unwrap();
        let mut two = omega.clone();
        two.scale(&Scalar::from_int(2));
        assert_eq!(l0.apply(&omega).unwrap(), two);
        // ω_m = L(m−1) on all window pieces where both are defined
        for m in -1..=3i64 {
            let lk = sugawara_operator(&ctx.v, &kappa, m - 1).unwrap();
            for d in 0..=3usize {
                if d as i64 - (m - 1) + 2 - 1 > 3 {
                    continue;
                }
                let Some(cols) = &lk.columns[d] else { continue };
                for i in 0..ctx.v.piece_dim(d) {
                    let t = WindowVec::basis_vector(d, i);
                    let lhs = ctx.state_mode_apply(&omega, m, &t).unwrap();
                    assert_eq!(lhs, cols[i], "omega mode {m} != L_{} at depth {d}", m - 1);
                }
            }
        }
    }

    #[test]
    fn opposite_operator_of_generators() {
        // Y^o(a(−1)1)_m = −a(−m)
        let ctx = vacuum_ctx(-1, 2);
        for basis in 0..3usize {
            let state = generator_state(&ctx, basis);
            for m in -2..=2i64 {
                for d in 0..=2usize {
                    if d as i64 + m > 2 {
                        continue;
                    }
                    for i in 0..ctx.w.piece_dim(d) {
                        let t = WindowVec::basis_vector(d, i);
                        let lhs = ctx.opposite_mode_apply(&state, m, &t).unwrap();
                        let mut rhs = ctx.w.act(basis, -m, &t).unwrap();
                        rhs.scale(&Scalar::from_int(-1));
                        assert_eq!(lhs, rhs, "opposite mode {m} basis {basis}");
                    }
                }
            }
        }
    }

    #[test]
    fn opposite_is_involutive_on_samples() {
        // (Y^o)^o = Y on generator states: check the double-opposite mode
        // against the plain mode through the defining sum.
        let ctx = vacuum_ctx(-1, 2);
        let state = generator_state(&ctx, 0); // h = 1, L(1)-free
        // Y^{oo}(v)_m = Σ_k (−1)^h/k! (L1^k …): for weight-1 generators the
        // reindexing collapses to modes: (Y^o)^o_m = −(Y^o)_{−m} = a(m).
        for m in -1..=1i64 {
            for d in 0..=1usize {
                if d as i64 - m > 2 {
                    continue;
                }
                for i in 0..ctx.w.piece_dim(d) {
                    let t = WindowVec::basis_vector(d, i);
                    let mut oo = ctx.opposite_mode_apply(&state, -m, &t).unwrap();
                    oo.scale(&Scalar::from_int(-1));
                    let plain = ctx.state_mode_apply(&state, m, &t).unwrap();
                    assert_eq!(oo, plain);
                }
            }
        }
    }

    #[test]
    fn contragredient_pairing_identity() {
        let ctx = vacuum_ctx(-1, 2);
        let state = generator_state(&ctx, 1);
        let slice = contragredient_action(&ctx, &state, -1, 1).unwrap();
        for (n, per_depth) in &slice.modes {
            for dprime in 0..=2usize {
                let Some(cols) = &per_depth[dprime] else { continue };
                for i in 0..cols.len() {
                    // ⟨Y'_n λ, w⟩ must equal ⟨λ, Y^o_n w⟩
                    for d in 0..=2usize {
                        for j in 0..ctx.w.piece_dim(d) {
                            let lhs = cols[i].component(d).get(j);
                            let img = ctx
                                .opposite_mode_apply(&state, *n, &WindowVec::basis_vector(d, j))
                                .unwrap();
                            let rhs = img.component(dprime).get(i);
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_box_on_generators() {
        let ctx = vacuum_ctx(-1, 3);
        let u = generator_state(&ctx, 0);
        let v = generator_state(&ctx, 2);
        let w = WindowVec::basis_vector(0, 0);
        let (ok, _) = check_jacobi(&ctx, &ctx, &u, &v, &w, 2).unwrap();
        assert!(ok);
        // vacuum state: trivially satisfied
        let vac = WindowVec::basis_vector(0, 0);
        let (ok, _) = check_jacobi(&ctx, &ctx, &vac, &v, &w, 2).unwrap();
        assert!(ok);
    }

    #[test]
    fn jacobi_commutator_reproduces_affine_bracket() {
        // coefficient p=0: [u_q, v_r] = Σ_i C(0,i)(u_i v)_{q+r} = (u_0 v)_{q+r}
        // for generators this is [a,b](q+r) + q (a,b) l δ_{q+r,0} matching
        // the affine bracket; verified through the box check on deeper
        // vectors.
        let ctx = vacuum_ctx(-1, 3);
        let u = generator_state(&ctx, 0);
        let v = generator_state(&ctx, 2);
        for d in 0..=1usize {
            for i in 0..ctx.w.piece_dim(d) {
                let w = WindowVec::basis_vector(d, i);
                let (ok, _) = check_jacobi(&ctx, &ctx, &u, &v, &w, 2).unwrap();
                assert!(ok);
            }
        }
    }

    #[test]
    fn locality_for_commuting_orthogonal_generators() {
        // sl3 has basis pairs with [a,b] = 0 and (a,b) = 0, e.g. the two
        // opposite corner root vectors e12 and e13.
        let g = Arc::new(build_sl(3).unwrap());
        let v = Arc::new(
            induce(
                g.clone(),
                LowestSpace::plain(WeightModule::trivial(&g)),
                Scalar::from_int(-1),
                2,
            )
            .unwrap(),
        );
        let ctx = VoaContext::new(v.clone(), v, Scalar::from_int(-1)).unwrap();
        // find an orthogonal commuting pair
        let mut pair = None;
        'outer: for a in 0..g.dim {
            for b in 0..g.dim {
                if a != b
                    && g.brackets[a][b].is_zero()
                    && g.pair_basis(a, b).is_zero()
                {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = pair.expect("sl3 has such a pair");
        let u = generator_state(&ctx, a);
        let vstate = generator_state(&ctx, b);
        // all bracket coefficients vanish: u_0 v = u_1 v = 0
        let uv0 = ctx.state_mode_apply(&u, 0, &vstate).unwrap();
        let uv1 = ctx.state_mode_apply(&u, 1, &vstate).unwrap();
        assert!(uv0.is_zero());
        assert!(uv1.is_zero());
        let w = WindowVec::basis_vector(0, 0);
        let (ok, _) = check_jacobi(&ctx, &ctx, &u, &vstate, &w, 1).unwrap();
        assert!(ok);
    }

    #[test]
    fn c1_quotient_of_vacuum_module() {
        let ctx = vacuum_ctx(-1, 3);
        let report = c1_quotient_dimension(&ctx, 3).unwrap();
        assert_eq!(report.total, 1);
        assert!(report.stabilized);
        assert_eq!(report.per_depth[0], 1);
        assert!(report.per_depth[1..].iter().all(|&x| x == 0));
        assert!(c1_quotient_dimension(&ctx, 1).is_err());
    }

    #[test]
    fn c1_quotient_of_weyl_module() {
        let g = Arc::new(build_sl(2).unwrap());
        let fund = highest_weight_module(&g, &[1]).unwrap();
        let kappa = Scalar::from_int(-1);
        let v = Arc::new(
            induce(
                g.clone(),
                LowestSpace::plain(WeightModule::trivial(&g)),
                kappa.clone(),
                3,
            )
            .unwrap(),
        );
        let w = Arc::new(induce(g, LowestSpace::plain(fund), kappa.clone(), 3).unwrap());
        let ctx = VoaContext::new(v, w, kappa).unwrap();
        let report = c1_quotient_dimension(&ctx, 3).unwrap();
        assert!(report.total <= 2);
        assert!(report.stabilized);
    }

    #[test]
    fn deep_creation_modes_in_c1_span() {
        // a(−n) w lies in the C1 span for n >= 2 (through the
        // L(−1)-derivative reduction), here checked by rank membership.
        let ctx = vacuum_ctx(-1, 3);
        let vac = WindowVec::basis_vector(0, 0);
        for n in 2..=3i64 {
            let vec = ctx.w.act(0, -n, &vac).unwrap();
            assert!(in_c1_span(&ctx, &vec, n as usize, 3).unwrap());
        }
    }
}
