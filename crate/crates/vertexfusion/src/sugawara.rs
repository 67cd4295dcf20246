//! Segal-Sugawara operators on truncated modules, Virasoro relation
//! verification, and generalized eigenspace analysis of L_0.
//!
//! L_k is the normal-ordered quadratic sum
//!
//!   L_k = (1/2κ) [ Σ_{j ≥ −k/2} Σ_i u_i(−j) u^i(j+k)
//!                + Σ_{j < −k/2} Σ_i u_i(j+k) u^i(−j) ]
//!
//! realized with dual-basis pairs (u_i), (u^i) instead of an orthonormal
//! basis so that everything stays inside the base field. The split at
//! j ≥ −k/2 keeps the half-integer boundary for odd k.

use crate::affine::{GradedModule, WindowVec};
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::scalar::Scalar;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;

/// A Segal-Sugawara operator materialized on the window.
pub struct VirasoroOperator {
    pub k: i64,
    /// columns[d][i] = L_k applied to the i-th basis vector of depth d;
    /// depths whose image leaves the window are absent.
    pub columns: Vec<Option<Vec<WindowVec>>>,
}

impl VirasoroOperator {
    pub fn apply(&self, v: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (d, comp) in &v.comps {
            let cols = self.columns.get(*d).and_then(|c| c.as_ref()).ok_or_else(|| {
                Error::OutOfWindow(format!("L_{} not available from depth {d}", self.k))
            })?;
            for (i, c) in &comp.entries {
                out.add_scaled(&cols[*i], c);
            }
        }
        Ok(out)
    }
}

fn div_ceil_i64(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a >= 0 {
        (a + b - 1) / b
    } else {
        -((-a) / b)
    }
}

fn div_floor_i64(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a >= 0 {
        a / b
    } else {
        -((-a + b - 1) / b)
    }
}

/// L_k on one window basis vector, using the given dual-basis pair.
fn apply_lk_basis(
    w: &GradedModule,
    kappa: &Scalar,
    k: i64,
    depth: usize,
    idx: usize,
    primal: &[SparseVec],
    dual: &[SparseVec],
) -> Result<WindowVec> {
    let spill = w.max_lowest_mode();
    let d = depth as i64;
    let v = WindowVec::basis_vector(depth, idx);
    let mut acc = WindowVec::new();
    // first sum: j >= -k/2, right factor mode j+k
    let j_lo = div_ceil_i64(-k, 2);
    let j_hi = d + spill - k; // beyond this the right factor annihilates
    for j in j_lo..=j_hi {
        for i in 0..primal.len() {
            let inner = w.act_element(&dual[i], j + k, &v)?;
            if inner.is_zero() {
                continue;
            }
            let outer = w.act_element(&primal[i], -j, &inner)?;
            acc.add_scaled(&outer, &Scalar::one());
        }
    }
    // second sum: j < -k/2, right factor mode -j
    let j_hi2 = div_floor_i64(-k - 1, 2);
    let j_lo2 = -(d + spill);
    for j in j_lo2..=j_hi2 {
        for i in 0..primal.len() {
            let inner = w.act_element(&dual[i], -j, &v)?;
            if inner.is_zero() {
                continue;
            }
            let outer = w.act_element(&primal[i], j + k, &inner)?;
            acc.add_scaled(&outer, &Scalar::one());
        }
    }
    let half = Scalar::one().div(&(Scalar::from_int(2) * kappa.clone()))?;
    acc.scale(&half);
    Ok(acc)
}

/// Materializes L_k on every window piece whose image stays inside the
/// window. Requires κ ≠ 0 and |k| ≤ 2·cap.
pub fn sugawara_operator(w: &GradedModule, kappa: &Scalar, k: i64) -> Result<VirasoroOperator> {
    sugawara_operator_with_bases(w, kappa, k, None)
}

/// As [`sugawara_operator`], with an explicit dual-basis pair (used to
/// check independence of the choice).
pub fn sugawara_operator_with_bases(
    w: &GradedModule,
    kappa: &Scalar,
    k: i64,
    bases: Option<(&[SparseVec], &[SparseVec])>,
) -> Result<VirasoroOperator> {
    if kappa.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if k.unsigned_abs() as usize > 2 * w.depth_cap {
        return Err(Error::OutOfWindow(format!(
            "L_{k} is out of window everywhere at cap {}",
            w.depth_cap
        )));
    }
    let owned;
    let (primal, dual) = match bases {
        Some((p, d)) => (p, d),
        None => {
            owned = w.algebra.dual_bases()?;
            (&owned.0[..], &owned.1[..])
        }
    };
    let spill = w.max_lowest_mode();
    let cap = w.depth_cap as i64;
    let mut columns = Vec::with_capacity(w.depth_cap + 1);
    for depth in 0..=w.depth_cap {
        let d = depth as i64;
        // the image may reach depth d - k (+ spill for generalized data)
        if d - k + spill.max(0) > cap && d - k > cap {
            columns.push(None);
            continue;
        }
        if d - k > cap {
            columns.push(None);
            continue;
        }
        let mut cols = Vec::with_capacity(w.piece_dim(depth));
        let mut ok = true;
        for idx in 0..w.piece_dim(depth) {
            match apply_lk_basis(w, kappa, k, depth, idx, primal, dual) {
                Ok(col) => cols.push(col),
                Err(Error::OutOfWindow(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        columns.push(if ok { Some(cols) } else { None });
    }
    Ok(VirasoroOperator { k, columns })
}

/// Central charge ℓ·dim g / κ.
pub fn central_charge(w: &GradedModule) -> Result<Scalar> {
    (w.level.clone() * Scalar::from_int(w.algebra.dim as i64)).div(&w.kappa)
}

/// Verifies [L_m, L_n] = (m−n) L_{m+n} + δ_{m+n,0} (m³−m)/12 · c on every
/// window piece where all compositions stay inside the window. Returns the
/// central charge as witness.
pub fn check_virasoro(w: &GradedModule, kappa: &Scalar, m: i64, n: i64) -> Result<(bool, Scalar)> {
    let lm = sugawara_operator(w, kappa, m)?;
    let ln = sugawara_operator(w, kappa, n)?;
    let lmn = sugawara_operator(w, kappa, m + n)?;
    let c = central_charge(w)?;
    let cap = w.depth_cap as i64;
    let mut tested = false;
    for depth in 0..=w.depth_cap {
        let d = depth as i64;
        let tops = [d - n, d - m, d - m - n];
        if tops.iter().any(|&t| t > cap) {
            continue;
        }
        if lm.columns[depth].is_none() || ln.columns[depth].is_none() {
            continue;
        }
        for i in 0..w.piece_dim(depth) {
            let v = WindowVec::basis_vector(depth, i);
            let a = lm.apply(&ln.apply(&v)?)?;
            let b = ln.apply(&lm.apply(&v)?)?;
            let mut lhs = a;
            lhs.add_scaled(&b, &Scalar::from_int(-1));
            let mut rhs = lmn.apply(&v)?;
            rhs.scale(&Scalar::from_int(m - n));
            if m + n == 0 {
                let coef =
                    Scalar::from_ratio(m * m * m - m, 12) * c.clone();
                rhs.add_scaled(&v, &coef);
            }
            lhs.add_scaled(&rhs, &Scalar::from_int(-1));
            if !lhs.is_zero() {
                return Ok((false, c));
            }
            tested = true;
        }
    }
    if !tested {
        return Err(Error::OutOfWindow(format!(
            "no window piece supports [L_{m}, L_{n}] at cap {}",
            w.depth_cap
        )));
    }
    Ok((true, c))
}

/// Verifies [L_k, a(n)] = −n a(n+k) on all pieces where the compositions
/// stay in the window.
pub fn check_mode_commutator(w: &GradedModule, kappa: &Scalar, k: i64, n: i64) -> Result<bool> {
    let lk = sugawara_operator(w, kappa, k)?;
    let cap = w.depth_cap as i64;
    let mut tested = false;
    for depth in 0..=w.depth_cap {
        let d = depth as i64;
        if [d - n, d - k, d - n - k].iter().any(|&t| t > cap) {
            continue;
        }
        if lk.columns[depth].is_none() {
            continue;
        }
        if d - n >= 0 && d - n <= cap && lk.columns[(d - n) as usize].is_none() {
            continue;
        }
        for basis in 0..w.algebra.dim {
            for i in 0..w.piece_dim(depth) {
                let v = WindowVec::basis_vector(depth, i);
                let an_v = w.act(basis, n, &v)?;
                let mut lhs = lk.apply(&an_v)?;
                lhs.add_scaled(&w.act(basis, n, &lk.apply(&v)?)?, &Scalar::from_int(-1));
                let mut rhs = w.act(basis, n + k, &v)?;
                rhs.scale(&Scalar::from_int(-n));
                lhs.add_scaled(&rhs, &Scalar::from_int(-1));
                if !lhs.is_zero() {
                    return Ok(false);
                }
                tested = true;
            }
        }
    }
    if !tested {
        return Err(Error::OutOfWindow(format!(
            "no window piece supports [L_{k}, a({n})] at cap {}",
            w.depth_cap
        )));
    }
    Ok(true)
}

/// One generalized eigenvalue of L_0 on the window.
#[derive(Debug, Clone)]
pub struct EigenvalueReport {
    pub eigenvalue: Scalar,
    pub multiplicity: usize,
    /// ker(L−μ) = ker((L−μ)²); false reveals a Jordan block.
    pub semisimple: bool,
    /// Multiplicity of the plain eigenspace per depth.
    pub depth_support: BTreeMap<usize, usize>,
}

/// Generalized eigenspace decomposition of L_0 on the window.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<EigenvalueReport>,
    /// Window dimension not accounted for by rational eigenvalues.
    pub unresolved: usize,
    pub semisimple: bool,
}

/// Dense characteristic polynomial by the Faddeev–LeVerrier recursion,
/// exact over the base field. Suitable for small blocks.
fn char_poly(m: &SparseMat) -> Result<Vec<Scalar>> {
    let n = m.nrows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut aux = SparseMat::identity(n);
    for k in 1..=n {
        let prod = m.mat_mul(&aux);
        let mut tr = Scalar::zero();
        for i in 0..n {
            tr += prod.get(i, i);
        }
        let c = (-tr.clone()).div(&Scalar::from_int(k as i64))?;
        coeffs[n - k] = c.clone();
        aux = prod.add(&SparseMat::identity(n).scale(&c));
    }
    Ok(coeffs)
}

/// Rational roots of an exact-rational polynomial, with multiplicity
/// ignored; None when coefficients do not fit the search.
fn rational_roots(coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
    // clear denominators to an integer polynomial
    let mut rats = Vec::new();
    for c in coeffs {
        rats.push(c.as_rational()?.clone());
    }
    let mut lcm = BigInt::one();
    for r in &rats {
        let d = r.denom();
        let g = num::integer::gcd(lcm.clone(), d.clone());
        lcm = lcm * d / g;
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * &lcm).to_integer()).collect();
    let lead = ints.iter().rposition(|c| !c.is_zero())?;
    let mut low = 0;
    while low < lead && ints[low].is_zero() {
        low += 1;
    }
    let mut roots = vec![];
    if low > 0 {
        roots.push(Scalar::zero());
    }
    let a0: i64 = ints[low].abs().try_into().ok()?;
    let an: i64 = ints[lead].abs().try_into().ok()?;
    let divisors = |x: i64| -> Vec<i64> {
        let mut out = vec![];
        let mut d = 1;
        while d * d <= x {
            if x % d == 0 {
                out.push(d);
                out.push(x / d);
            }
            d += 1;
        }
        out
    };
    let eval = |x: &Scalar| -> Scalar {
        let mut acc = Scalar::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Scalar::from_ratio(sign * p, q);
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

/// Matrix of L_0 on the available sub-window in the depth-major basis.
///
/// On plain induced modules every piece is available and the matrix is the
/// full window action. On modules with generalized lowest-space data, L_0
/// raises depth and the pieces near the top of the window cannot be
/// materialized; the analysis then runs on the compression of L_0 to the
/// available depths (components above them are dropped, which only removes
/// strictly-raising nilpotent directions).
fn l0_window_matrix(w: &GradedModule, kappa: &Scalar) -> Result<(SparseMat, Vec<usize>, usize)> {
    let l0 = sugawara_operator(w, kappa, 0)?;
    let d_max = l0
        .columns
        .iter()
        .take_while(|c| c.is_some())
        .count()
        .checked_sub(1)
        .ok_or_else(|| Error::OutOfWindow("L_0 unavailable on every piece".into()))?;
    let dims: Vec<usize> = (0..=d_max).map(|d| w.piece_dim(d)).collect();
    let total: usize = dims.iter().sum();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let mut m = SparseMat::zero(total, total);
    for depth in 0..=d_max {
        let cols = l0.columns[depth].as_ref().expect("available by choice of d_max");
        for (i, col) in cols.iter().enumerate() {
            for (dd, comp) in &col.comps {
                if *dd > d_max {
                    continue;
                }
                for (r, v) in &comp.entries {
                    m.rows[offsets[*dd] + r].set(offsets[depth] + i, v.clone());
                }
            }
        }
    }
    Ok((m, offsets, d_max))
}

/// Generalized eigenspace decomposition of L_0 over the window, with exact
/// rational eigenvalues. Jordan blocks are detected by comparing kernels of
/// successive powers.
pub fn generalized_eigenspaces(w: &GradedModule, kappa: &Scalar) -> Result<SpectrumReport> {
    let (l0, offsets, d_max) = l0_window_matrix(w, kappa)?;
    let total = l0.nrows();
    // candidate eigenvalues: rational roots of the characteristic
    // polynomials of the diagonal depth blocks, which are small because L_0
    // only raises depth across blocks
    let mut candidates: Vec<Scalar> = Vec::new();
    for depth in 0..=d_max {
        let n = w.piece_dim(depth);
        if n == 0 {
            continue;
        }
        let mut block = SparseMat::zero(n, n);
        let mut scalar_block = true;
        let first = l0.get(offsets[depth], offsets[depth]);
        for r in 0..n {
            for c in 0..n {
                let v = l0.get(offsets[depth] + r, offsets[depth] + c);
                if r == c && v != first {
                    scalar_block = false;
                }
                if r != c && !v.is_zero() {
                    scalar_block = false;
                }
                block.rows[r].set(c, v);
            }
        }
        let roots = if scalar_block {
            vec![first]
        } else {
            match char_poly(&block).ok().and_then(|p| rational_roots(&p)) {
                Some(r) => r,
                None => continue,
            }
        };
        for r in roots {
            if !candidates.contains(&r) {
                candidates.push(r);
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut eigenvalues = Vec::new();
    let mut accounted = 0usize;
    let mut all_semisimple = true;
    for mu in candidates {
        let shifted = l0.sub(&SparseMat::identity(total).scale(&mu));
        // iterate kernels of powers until stable
        let mut power = shifted.clone();
        let mut prev_dim = power.kernel_basis().len();
        let first_dim = prev_dim;
        if prev_dim == 0 {
            continue;
        }
        let mut gen_dim = prev_dim;
        loop {
            power = power.mat_mul(&shifted);
            let k = power.kernel_basis().len();
            if k == gen_dim {
                break;
            }
            gen_dim = k;
            prev_dim = prev_dim.max(k);
        }
        let semisimple = gen_dim == first_dim;
        if !semisimple {
            all_semisimple = false;
        }
        // depth support of the plain eigenspace
        let mut depth_support = BTreeMap::new();
        for v in shifted.kernel_basis() {
            let top = v
                .entries
                .keys()
                .map(|&i| {
                    offsets
                        .iter()
                        .rposition(|&o| o <= i)
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0);
            *depth_support.entry(top).or_insert(0) += 1;
        }
        accounted += gen_dim;
        eigenvalues.push(EigenvalueReport {
            eigenvalue: mu,
            multiplicity: gen_dim,
            semisimple,
            depth_support,
        });
    }
    Ok(SpectrumReport {
        eigenvalues,
        unresolved: total.saturating_sub(accounted),
        semisimple: all_semisimple,
    })
}

/// Spectrum table as CSV: depth,eigenvalue,multiplicity,semisimple.
pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("depth,eigenvalue,multiplicity,semisimple\n");
    for e in &report.eigenvalues {
        for (depth, mult) in &e.depth_support {
            out.push_str(&format!(
                "{depth},{},{mult},{}\n",
                e.eigenvalue, e.semisimple
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{induce, LowestSpace};
    use crate::liealg::{build_sl, highest_weight_module, WeightModule};
    use std::sync::Arc;

    fn vacuum(kappa: i64, cap: usize) -> GradedModule {
        let g = Arc::new(build_sl(2).unwrap());
        induce(
            g.clone(),
            LowestSpace::plain(WeightModule::trivial(&g)),
            Scalar::from_int(kappa),
            cap,
        )
        .unwrap()
    }

    #[test]
    fn l0_on_vacuum_and_generators() {
        let w = vacuum(-1, 2);
        let kappa = Scalar::from_int(-1);
        let l0 = sugawara_operator(&w, &kappa, 0).unwrap();
        // L_0 1 = 0
        let vac = WindowVec::basis_vector(0, 0);
        assert!(l0.apply(&vac).unwrap().is_zero());
        // L_0 a(-1)1 = a(-1)1
        for i in 0..w.piece_dim(1) {
            let v = WindowVec::basis_vector(1, i);
            assert_eq!(l0.apply(&v).unwrap(), v);
        }
    }

    #[test]
    fn l0_lowest_weight_of_weyl_module() {
        // lowest L_0 eigenvalue of M(l, omega) is (3/4)/kappa
        let g = Arc::new(build_sl(2).unwrap());
        let fund = highest_weight_module(&g, &[1]).unwrap();
        let kappa = Scalar::from_int(-1);
        let w = induce(g, LowestSpace::plain(fund), kappa.clone(), 1).unwrap();
        let l0 = sugawara_operator(&w, &kappa, 0).unwrap();
        let expected = Scalar::from_ratio(3, 4).div(&kappa).unwrap();
        for i in 0..w.piece_dim(0) {
            let v = WindowVec::basis_vector(0, i);
            let mut e = v.clone();
            e.scale(&expected);
            assert_eq!(l0.apply(&v).unwrap(), e);
        }
    }

    #[test]
    fn virasoro_relations_and_central_charge() {
        let w = vacuum(-1, 3);
        let kappa = Scalar::from_int(-1);
        // c = l dim g / kappa = (-3)(3)/(-1) = 9
        assert_eq!(central_charge(&w).unwrap(), Scalar::from_int(9));
        for m in -1..=1i64 {
            for n in -1..=1i64 {
                let (ok, c) = check_virasoro(&w, &kappa, m, n).unwrap();
                assert!(ok, "[L_{m}, L_{n}] failed");
                assert_eq!(c, Scalar::from_int(9));
            }
        }
        // [L_1, L_-1] = 2 L_0 with no central term
        let (ok, _) = check_virasoro(&w, &kappa, 1, -1).unwrap();
        assert!(ok);
    }

    #[test]
    fn l2_lm2_on_vacuum_gives_half_c() {
        let w = vacuum(-1, 2);
        let kappa = Scalar::from_int(-1);
        let l2 = sugawara_operator(&w, &kappa, 2).unwrap();
        let lm2 = sugawara_operator(&w, &kappa, -2).unwrap();
        let vac = WindowVec::basis_vector(0, 0);
        let mut comm = l2.apply(&lm2.apply(&vac).unwrap()).unwrap();
        comm.add_scaled(&lm2.apply(&l2.apply(&vac).unwrap()).unwrap(), &Scalar::from_int(-1));
        // 4 L_0 1 + (1/2) c 1 = (9/2) 1
        let mut expect = vac.clone();
        expect.scale(&Scalar::from_ratio(9, 2));
        assert_eq!(comm, expect);
    }

    #[test]
    fn generic_kappa_central_charge() {
        let g = Arc::new(build_sl(2).unwrap());
        let kappa = Scalar::kappa();
        let w = induce(
            g.clone(),
            LowestSpace::plain(WeightModule::trivial(&g)),
            kappa.clone(),
            2,
        )
        .unwrap();
        // c = 3 (kappa - 2) / kappa as a rational function identity
        let c = central_charge(&w).unwrap();
        let expect = (Scalar::from_int(3) * (kappa.clone() - Scalar::from_int(2)))
            .div(&kappa)
            .unwrap();
        assert_eq!(c, expect);
        let (ok, _) = check_virasoro(&w, &kappa, 1, -1).unwrap();
        assert!(ok);
    }

    #[test]
    fn mode_commutators() {
        let w = vacuum(-1, 3);
        let kappa = Scalar::from_int(-1);
        for k in -1..=1i64 {
            for n in -2..=2i64 {
                assert!(
                    check_mode_commutator(&w, &kappa, k, n).unwrap(),
                    "[L_{k}, a({n})] failed"
                );
            }
        }
    }

    #[test]
    fn dual_basis_independence() {
        let w = vacuum(-1, 2);
        let kappa = Scalar::from_int(-1);
        // alternative pair: permute the primal basis (f, h, e) and build the
        // matching dual by inverting the Gram matrix of that order
        let g = &w.algebra;
        let primal = vec![SparseVec::unit(2), SparseVec::unit(1), SparseVec::unit(0)];
        let mut gram = SparseMat::zero(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let v = g.pair(&primal[i], &primal[j]);
                if !v.is_zero() {
                    gram.rows[i].set(j, v);
                }
            }
        }
        let inv = gram.inverse().unwrap();
        let dual: Vec<SparseVec> = (0..3)
            .map(|j| {
                let mut v = SparseVec::new();
                for k in 0..3 {
                    let c = inv.get(j, k);
                    if !c.is_zero() {
                        v.add_scaled(&primal[k], &c);
                    }
                }
                v
            })
            .collect();
        for k in [-1i64, 0, 1, 2] {
            let a = sugawara_operator(&w, &kappa, k).unwrap();
            let b = sugawara_operator_with_bases(&w, &kappa, k, Some((&primal, &dual))).unwrap();
            for d in 0..=w.depth_cap {
                match (&a.columns[d], &b.columns[d]) {
                    (Some(x), Some(y)) => assert_eq!(x, y, "L_{k} differs at depth {d}"),
                    (None, None) => {}
                    _ => panic!("availability differs"),
                }
            }
        }
    }

    #[test]
    fn weyl_module_spectrum_is_semisimple() {
        let g = Arc::new(build_sl(2).unwrap());
        let fund = highest_weight_module(&g, &[1]).unwrap();
        let kappa = Scalar::from_int(-1);
        let w = induce(g, LowestSpace::plain(fund), kappa.clone(), 2).unwrap();
        let report = generalized_eigenspaces(&w, &kappa).unwrap();
        assert!(report.semisimple);
        assert_eq!(report.unresolved, 0);
        // eigenvalues are h + d with h = -3/4
        let h = Scalar::from_ratio(-3, 4);
        let dims = w.graded_dims();
        for (d, dim) in dims.iter().enumerate() {
            let mu = h.clone() + Scalar::from_int(d as i64);
            let e = report
                .eigenvalues
                .iter()
                .find(|e| e.eigenvalue == mu)
                .expect("eigenvalue present");
            assert_eq!(e.multiplicity, *dim);
        }
    }

    #[test]
    fn jordan_block_from_generalized_lowest_space() {
        // adjoint ⊕ trivial lowest space with a(1) x = (a, x) w0; at
        // kappa = 2 the depth-0 adjoint eigenvalue 2/kappa collides with the
        // depth-1 eigenvalue above the trivial summand and L_0 acquires a
        // Jordan block.
        let g = Arc::new(build_sl(2).unwrap());
        let adj = WeightModule::adjoint(&g);
        let triv = WeightModule::trivial(&g);
        let m = adj.direct_sum(&triv);
        let mut positive = BTreeMap::new();
        for a in 0..3usize {
            let mut mat = SparseMat::zero(4, 4);
            for x in 0..3usize {
                let v = g.pair_basis(a, x);
                if !v.is_zero() {
                    mat.rows[3].set(x, v);
                }
            }
            positive.insert((a, 1i64), mat);
        }
        let lowest = LowestSpace {
            module: m,
            positive_actions: positive,
        };
        let kappa = Scalar::from_int(2);
        let w = induce(g, lowest, kappa.clone(), 2).unwrap();
        assert!(w.kappa_warning);
        let report = generalized_eigenspaces(&w, &kappa).unwrap();
        assert!(!report.semisimple, "expected a Jordan block");
        let jordan = report
            .eigenvalues
            .iter()
            .find(|e| !e.semisimple)
            .expect("non-semisimple eigenvalue");
        assert_eq!(jordan.eigenvalue, Scalar::one());
    }
}
