//! The affine Lie algebra ĝ, depth-truncated induced modules with PBW
//! straightening, contragredient modules, and structural checks.
//!
//! A depth-truncated module stores graded pieces for depths 0..=D and the
//! mode actions a(n) between them. Operators whose output would leave the
//! window upward are reported as out-of-window, never silently zeroed;
//! a(n) applied below depth 0 is honest zero (restrictedness).

use crate::error::{Error, Result};
use crate::formal::TruncatedLaurentSeries;
use crate::liealg::{self, LieAlgebra, WeightModule};
use crate::linalg::{SparseMat, SparseVec};
use crate::scalar::Scalar;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Element of ĝ = g ⊗ F[t, t⁻¹] ⊕ F·k: finitely many loop terms plus a
/// central coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineElement {
    /// (mode n, basis index) -> coefficient.
    pub terms: BTreeMap<(i64, usize), Scalar>,
    pub central: Scalar,
}

impl AffineElement {
    pub fn zero() -> Self {
        AffineElement {
            terms: BTreeMap::new(),
            central: Scalar::zero(),
        }
    }

    pub fn generator(basis: usize, mode: i64) -> Self {
        let mut e = AffineElement::zero();
        e.terms.insert((mode, basis), Scalar::one());
        e
    }

    pub fn central_element() -> Self {
        AffineElement {
            terms: BTreeMap::new(),
            central: Scalar::one(),
        }
    }

    pub fn add_term(&mut self, mode: i64, basis: usize, c: Scalar) {
        let key = (mode, basis);
        let v = self.terms.remove(&key).unwrap_or_else(Scalar::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }
}

/// [a⊗t^m, b⊗t^n] = [a,b]⊗t^{m+n} + m (a,b) δ_{m+n,0} k, bilinearly; k is
/// central.
pub fn affine_bracket(g: &LieAlgebra, x: &AffineElement, y: &AffineElement) -> AffineElement {
    let mut out = AffineElement::zero();
    for ((m, i), cx) in &x.terms {
        for ((n, j), cy) in &y.terms {
            let c = cx.clone() * cy.clone();
            let br = &g.brackets[*i][*j];
            for (k, v) in &br.entries {
                out.add_term(m + n, *k, c.clone() * v.clone());
            }
            if m + n == 0 {
                let form = g.pair_basis(*i, *j);
                if !form.is_zero() {
                    out.central = out.central.clone() + Scalar::from_int(*m) * form * c;
                }
            }
        }
    }
    out
}

/// Bracket on the completed algebra: [a⊗g1, b⊗g2] = [a,b]⊗g1·g2 +
/// {g1,g2}(a,b) k with {g1,g2} = Res g2 dg1/dt.
#[derive(Debug, Clone)]
pub struct CompletedBracket {
    /// Coefficients of [a,b] in the algebra basis.
    pub element: SparseVec,
    /// The series g1·g2 on its implied window.
    pub series: TruncatedLaurentSeries,
    pub central: Scalar,
}

pub fn completed_bracket(
    g: &LieAlgebra,
    a: &SparseVec,
    g1: &TruncatedLaurentSeries,
    b: &SparseVec,
    g2: &TruncatedLaurentSeries,
) -> Result<CompletedBracket> {
    let residue = g2.mul(&g1.derivative()).residue()?;
    Ok(CompletedBracket {
        element: g.bracket(a, b),
        series: g1.mul(g2),
        central: residue * g.pair(a, b),
    })
}

/// Lowest space of a generalized Weyl module: a finite-dimensional module
/// for the nonpositive part of ĝ. The degree-zero part acts through a
/// WeightModule; strictly positive modes act through finitely many explicit
/// matrices generating a nilpotent algebra; k acts as the level.
#[derive(Debug, Clone)]
pub struct LowestSpace {
    pub module: WeightModule,
    /// (basis index, mode n > 0) -> action matrix.
    pub positive_actions: BTreeMap<(usize, i64), SparseMat>,
}

impl LowestSpace {
    pub fn plain(module: WeightModule) -> Self {
        LowestSpace {
            module,
            positive_actions: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }

    /// The largest positive mode acting nonzero, 0 when none do.
    pub fn max_positive_mode(&self) -> i64 {
        self.positive_actions
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|((_, n), _)| *n)
            .max()
            .unwrap_or(0)
    }

    fn action(&self, basis: usize, mode: i64) -> Option<&SparseMat> {
        if mode == 0 {
            Some(&self.module.action[basis])
        } else {
            self.positive_actions.get(&(basis, mode))
        }
    }

    fn apply(&self, basis: usize, mode: i64, v: &SparseVec) -> SparseVec {
        debug_assert!(mode >= 0);
        match self.action(basis, mode) {
            Some(m) => m.apply(v),
            None => SparseVec::new(),
        }
    }

    /// Validates the ĝ_{<=0}-module axioms: the degree-zero part is a
    /// representation, brackets [a(m), b(n)] = [a,b](m+n) hold (no central
    /// term arises for m, n >= 0 with m+n > 0), and the positive part acts
    /// nilpotently.
    pub fn validate(&self, g: &LieAlgebra) -> Result<()> {
        if !self.module.verify_representation(g) {
            return Err(Error::InvalidInput(
                "lowest space: degree-zero action is not a representation".into(),
            ));
        }
        let jmax = self.max_positive_mode();
        let dim = self.dim();
        let act = |basis: usize, mode: i64| -> SparseMat {
            self.action(basis, mode)
                .cloned()
                .unwrap_or_else(|| SparseMat::zero(dim, dim))
        };
        for i in 0..g.dim {
            for m in 0..=jmax {
                for j in 0..g.dim {
                    for n in 0..=jmax {
                        if m == 0 && n == 0 {
                            continue;
                        }
                        let lhs = act(i, m)
                            .mat_mul(&act(j, n))
                            .sub(&act(j, n).mat_mul(&act(i, m)));
                        let mut rhs = SparseMat::zero(dim, dim);
                        for (k, c) in &g.brackets[i][j].entries {
                            rhs = rhs.add(&act(*k, m + n).scale(c));
                        }
                        if !lhs.sub(&rhs).is_zero() {
                            return Err(Error::InvalidInput(format!(
                                "lowest space: bracket [x{i}({m}), x{j}({n})] inconsistent"
                            )));
                        }
                    }
                }
            }
        }
        // nilpotency of the strictly positive part
        let gens: Vec<&SparseMat> = self
            .positive_actions
            .values()
            .filter(|m| !m.is_zero())
            .collect();
        if !gens.is_empty() {
            let mut layer: Vec<SparseMat> = gens.iter().map(|m| (*m).clone()).collect();
            for _ in 0..dim {
                if layer.iter().all(|m| m.is_zero()) {
                    break;
                }
                let mut next = Vec::new();
                for m in &layer {
                    for gmat in &gens {
                        let p = gmat.mat_mul(m);
                        if !p.is_zero() {
                            next.push(p);
                        }
                    }
                }
                layer = next;
            }
            if !layer.iter().all(|m| m.is_zero()) {
                return Err(Error::InvalidInput(
                    "lowest space: positive part does not act nilpotently".into(),
                ));
            }
        }
        Ok(())
    }
}

/// PBW monomial: strictly negative modes in canonical order (mode
/// ascending, most negative first; ties by basis index), over a lowest
/// space basis vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PBWMonomial {
    pub factors: Vec<(i64, usize)>,
    pub lowest: usize,
}

impl PBWMonomial {
    pub fn depth(&self) -> usize {
        self.factors.iter().map(|(n, _)| (-n) as usize).sum()
    }
}

/// A vector spread across the graded window: depth -> coordinates in that
/// piece.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowVec {
    pub comps: BTreeMap<usize, SparseVec>,
}

impl WindowVec {
    pub fn new() -> Self {
        WindowVec {
            comps: BTreeMap::new(),
        }
    }

    pub fn single(depth: usize, v: SparseVec) -> Self {
        let mut w = WindowVec::new();
        if !v.is_zero() {
            w.comps.insert(depth, v);
        }
        w
    }

    pub fn basis_vector(depth: usize, idx: usize) -> Self {
        WindowVec::single(depth, SparseVec::unit(idx))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|v| v.is_zero())
    }

    pub fn add_scaled(&mut self, other: &WindowVec, c: &Scalar) {
        for (d, v) in &other.comps {
            let entry = self.comps.entry(*d).or_default();
            entry.add_scaled(v, c);
        }
        self.comps.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&mut self, c: &Scalar) {
        for v in self.comps.values_mut() {
            v.scale(c);
        }
        self.comps.retain(|_, v| !v.is_zero());
    }

    pub fn component(&self, depth: usize) -> SparseVec {
        self.comps.get(&depth).cloned().unwrap_or_default()
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.comps.keys().next_back().copied()
    }
}

type ModeTables = BTreeMap<(usize, i64), Vec<Vec<WindowVec>>>;

enum Backing {
    /// Induced module with straightening data.
    Pbw {
        lowest: LowestSpace,
        tables: ModeTables,
        index: BTreeMap<PBWMonomial, (usize, usize)>,
    },
    /// Contragredient of another module; actions are derived transposes.
    Dual { parent: Arc<GradedModule> },
    /// Explicit tables only (adversarial and synthetic modules).
    Raw { tables: ModeTables },
}

/// A depth-truncated module of level ℓ = κ − h with materialized mode
/// actions.
pub struct GradedModule {
    pub algebra: Arc<LieAlgebra>,
    pub kappa: Scalar,
    pub level: Scalar,
    pub depth_cap: usize,
    /// PBW labels per depth (raw modules carry synthetic labels).
    pub pieces: Vec<Vec<PBWMonomial>>,
    /// True when κ lies in the excluded range ℚ_{>=0} (warning, not error).
    pub kappa_warning: bool,
    backing: Backing,
}

impl GradedModule {
    pub fn graded_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.len()).collect()
    }

    pub fn piece_dim(&self, depth: usize) -> usize {
        self.pieces.get(depth).map_or(0, |p| p.len())
    }

    /// Largest positive mode with lowest-space data (0 for plain modules).
    pub fn max_lowest_mode(&self) -> i64 {
        match &self.backing {
            Backing::Pbw { lowest, .. } => lowest.max_positive_mode(),
            Backing::Dual { parent } => parent.max_lowest_mode(),
            Backing::Raw { .. } => 0,
        }
    }

    pub fn monomial_index(&self, m: &PBWMonomial) -> Option<(usize, usize)> {
        match &self.backing {
            Backing::Pbw { index, .. } => index.get(m).copied(),
            _ => {
                let d = m.depth();
                self.pieces
                    .get(d)?
                    .iter()
                    .position(|x| x == m)
                    .map(|i| (d, i))
            }
        }
    }

    /// a(n) applied to one basis vector of a piece.
    pub fn act_basis(
        &self,
        basis: usize,
        mode: i64,
        depth: usize,
        idx: usize,
    ) -> Result<WindowVec> {
        let target = depth as i64 - mode;
        if target > self.depth_cap as i64 {
            return Err(Error::OutOfWindow(format!(
                "a({mode}) from depth {depth} exits the window above {}",
                self.depth_cap
            )));
        }
        match &self.backing {
            Backing::Pbw {
                lowest,
                tables,
                index,
            } => {
                if let Some(t) = tables.get(&(basis, mode)) {
                    return Ok(t[depth][idx].clone());
                }
                let mono = &self.pieces[depth][idx];
                let mut factors = vec![(mode, basis)];
                factors.extend_from_slice(&mono.factors);
                let ctx = StraightenCtx {
                    g: &self.algebra,
                    lowest,
                    level: &self.level,
                    cap: self.depth_cap,
                    index,
                };
                ctx.run(&factors, &SparseVec::unit(mono.lowest))
            }
            Backing::Dual { parent } => {
                // (a(n) λ)(w) = -(-1)^n λ(a(-n) w): scaled transpose of the
                // parent action out of the target piece.
                let mut out = WindowVec::new();
                if target < 0 {
                    return Ok(out);
                }
                let src = target as usize;
                let sign = if mode % 2 == 0 {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                let mut col = SparseVec::new();
                for j in 0..parent.piece_dim(src) {
                    let img = parent.act_basis(basis, -mode, src, j)?;
                    let c = img.component(depth).get(idx);
                    if !c.is_zero() {
                        col.set(j, c * sign.clone());
                    }
                }
                if !col.is_zero() {
                    out.comps.insert(src, col);
                }
                Ok(out)
            }
            Backing::Raw { tables } => match tables.get(&(basis, mode)) {
                Some(t) => Ok(t
                    .get(depth)
                    .and_then(|cols| cols.get(idx))
                    .cloned()
                    .unwrap_or_default()),
                None => Ok(WindowVec::new()),
            },
        }
    }

    /// a(n) applied to a window vector; errors if any component would exit
    /// the window upward, returns honest zero below depth 0.
    pub fn act(&self, basis: usize, mode: i64, v: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (d, comp) in &v.comps {
            for (i, c) in &comp.entries {
                let img = self.act_basis(basis, mode, *d, *i)?;
                out.add_scaled(&img, c);
            }
        }
        Ok(out)
    }

    /// Action of a Lie algebra element (coefficient vector) at one mode.
    pub fn act_element(&self, elem: &SparseVec, mode: i64, v: &WindowVec) -> Result<WindowVec> {
        let mut out = WindowVec::new();
        for (basis, c) in &elem.entries {
            let mut img = self.act(*basis, mode, v)?;
            img.scale(c);
            out.add_scaled(&img, &Scalar::one());
        }
        Ok(out)
    }

    /// Contragredient module D(W): graded dual with
    /// ((a⊗tⁿ)λ)(w) = −λ((a⊗(−t)⁻ⁿ)w).
    pub fn contragredient(self: &Arc<Self>) -> GradedModule {
        GradedModule {
            algebra: self.algebra.clone(),
            kappa: self.kappa.clone(),
            level: self.level.clone(),
            depth_cap: self.depth_cap,
            pieces: self.pieces.clone(),
            kappa_warning: self.kappa_warning,
            backing: Backing::Dual {
                parent: self.clone(),
            },
        }
    }

    /// Builds a module from explicit mode tables (tests and adversaries).
    pub fn from_raw(
        algebra: Arc<LieAlgebra>,
        kappa: Scalar,
        level: Scalar,
        piece_dims: &[usize],
        tables: ModeTables,
    ) -> GradedModule {
        let pieces = piece_dims
            .iter()
            .enumerate()
            .map(|(d, &n)| {
                (0..n)
                    .map(|i| PBWMonomial {
                        factors: vec![(-(d as i64) - 1, i)],
                        lowest: i,
                    })
                    .collect()
            })
            .collect();
        let kappa_warning = kappa.is_nonneg_rational();
        GradedModule {
            algebra,
            kappa,
            level,
            depth_cap: piece_dims.len().saturating_sub(1),
            pieces,
            kappa_warning,
            backing: Backing::Raw { tables },
        }
    }
}

struct StraightenCtx<'a> {
    g: &'a LieAlgebra,
    lowest: &'a LowestSpace,
    level: &'a Scalar,
    cap: usize,
    index: &'a BTreeMap<PBWMonomial, (usize, usize)>,
}

impl<'a> StraightenCtx<'a> {
    /// Rewrites a left-to-right product of generators applied to a lowest
    /// vector into PBW coordinates; the rightmost factor acts first.
    fn run(&self, factors: &[(i64, usize)], lowvec: &SparseVec) -> Result<WindowVec> {
        if lowvec.is_zero() {
            return Ok(WindowVec::new());
        }
        for i in 0..factors.len().saturating_sub(1) {
            let a = factors[i];
            let b = factors[i + 1];
            if a <= b {
                continue;
            }
            // x_i x_{i+1} = x_{i+1} x_i + [x_i, x_{i+1}]
            let mut swapped = factors.to_vec();
            swapped.swap(i, i + 1);
            let mut out = self.run(&swapped, lowvec)?;
            let (m, ai) = a;
            let (n, bi) = b;
            let br = &self.g.brackets[ai][bi];
            for (k, c) in &br.entries {
                let mut shorter: Vec<(i64, usize)> = Vec::with_capacity(factors.len() - 1);
                shorter.extend_from_slice(&factors[..i]);
                shorter.push((m + n, *k));
                shorter.extend_from_slice(&factors[i + 2..]);
                let mut term = self.run(&shorter, lowvec)?;
                term.scale(c);
                out.add_scaled(&term, &Scalar::one());
            }
            if m + n == 0 {
                let form = self.g.pair_basis(ai, bi);
                if !form.is_zero() {
                    let coef = Scalar::from_int(m) * form * self.level.clone();
                    let mut shorter: Vec<(i64, usize)> = Vec::with_capacity(factors.len() - 2);
                    shorter.extend_from_slice(&factors[..i]);
                    shorter.extend_from_slice(&factors[i + 2..]);
                    let mut term = self.run(&shorter, lowvec)?;
                    term.scale(&coef);
                    out.add_scaled(&term, &Scalar::one());
                }
            }
            return Ok(out);
        }
        // normal-ordered: consume nonnegative modes from the right
        if let Some(&(mode, basis)) = factors.last() {
            if mode >= 0 {
                let v = self.lowest.apply(basis, mode, lowvec);
                return self.run(&factors[..factors.len() - 1], &v);
            }
        }
        let depth: usize = factors.iter().map(|(n, _)| (-n) as usize).sum();
        if depth > self.cap {
            return Err(Error::OutOfWindow(format!(
                "monomial of depth {depth} exceeds cap {}",
                self.cap
            )));
        }
        let mut out = WindowVec::new();
        for (low, c) in &lowvec.entries {
            let mono = PBWMonomial {
                factors: factors.to_vec(),
                lowest: *low,
            };
            let (d, idx) = *self
                .index
                .get(&mono)
                .expect("normal-ordered monomial must be enumerated");
            debug_assert_eq!(d, depth);
            let comp = out.comps.entry(d).or_default();
            let v = comp.get(idx) + c.clone();
            comp.set(idx, v);
        }
        out.comps.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// Enumerates PBW monomials of each depth 0..=cap in deterministic order.
fn enumerate_pbw(gdim: usize, lowdim: usize, cap: usize) -> Vec<Vec<PBWMonomial>> {
    let mut pieces: Vec<Vec<PBWMonomial>> = vec![Vec::new(); cap + 1];
    let mut keys: Vec<(i64, usize)> = Vec::new();
    for mode in -(cap as i64)..0 {
        for b in 0..gdim {
            keys.push((mode, b));
        }
    }
    fn rec(
        keys: &[(i64, usize)],
        start: usize,
        remaining: usize,
        current: &mut Vec<(i64, usize)>,
        out: &mut Vec<Vec<(i64, usize)>>,
    ) {
        out.push(current.clone());
        for k in start..keys.len() {
            let (mode, _) = keys[k];
            let need = (-mode) as usize;
            if need <= remaining {
                current.push(keys[k]);
                rec(keys, k, remaining - need, current, out);
                current.pop();
            }
        }
    }
    let mut words = Vec::new();
    rec(&keys, 0, cap, &mut Vec::new(), &mut words);
    for w in words {
        let depth: usize = w.iter().map(|(n, _)| (-n) as usize).sum();
        for low in 0..lowdim {
            pieces[depth].push(PBWMonomial {
                factors: w.clone(),
                lowest: low,
            });
        }
    }
    for p in pieces.iter_mut() {
        p.sort();
    }
    pieces
}

/// Induces the depth-truncated module of level ℓ = κ − h from a lowest
/// space, materializing all mode actions with |n| ≤ depth cap.
pub fn induce(
    algebra: Arc<LieAlgebra>,
    lowest: LowestSpace,
    kappa: Scalar,
    cap: usize,
) -> Result<GradedModule> {
    lowest.validate(&algebra)?;
    let level = kappa.clone() - algebra.dual_coxeter.clone();
    let pieces = enumerate_pbw(algebra.dim, lowest.dim(), cap);
    let mut index = BTreeMap::new();
    for (d, piece) in pieces.iter().enumerate() {
        for (i, m) in piece.iter().enumerate() {
            index.insert(m.clone(), (d, i));
        }
    }
    let mut tables: ModeTables = BTreeMap::new();
    {
        let ctx = StraightenCtx {
            g: &algebra,
            lowest: &lowest,
            level: &level,
            cap,
            index: &index,
        };
        for basis in 0..algebra.dim {
            for mode in -(cap as i64)..=(cap as i64) {
                let mut per_depth = Vec::with_capacity(cap + 1);
                for (d, piece) in pieces.iter().enumerate() {
                    let mut cols = Vec::with_capacity(piece.len());
                    for mono in piece {
                        if d as i64 - mode > cap as i64 {
                            // out of window; act_basis re-raises on access
                            cols.push(WindowVec::new());
                            continue;
                        }
                        let mut factors = vec![(mode, basis)];
                        factors.extend_from_slice(&mono.factors);
                        cols.push(ctx.run(&factors, &SparseVec::unit(mono.lowest))?);
                    }
                    per_depth.push(cols);
                }
                tables.insert((basis, mode), per_depth);
            }
        }
    }
    let kappa_warning = kappa.is_nonneg_rational();
    Ok(GradedModule {
        algebra,
        kappa,
        level,
        depth_cap: cap,
        pieces,
        kappa_warning,
        backing: Backing::Pbw {
            lowest,
            tables,
            index,
        },
    })
}

/// Checks the bracket relation a(m)b(n) − b(n)a(m) = [a,b](m+n) +
/// m(a,b)δ_{m+n,0}ℓ on every graded piece where both compositions stay in
/// the window.
pub fn check_bracket_invariant(w: &GradedModule, max_mode: i64) -> Result<bool> {
    let g = &w.algebra;
    let cap = w.depth_cap as i64;
    for a in 0..g.dim {
        for b in 0..g.dim {
            for m in -max_mode..=max_mode {
                for n in -max_mode..=max_mode {
                    for depth in 0..=w.depth_cap {
                        let d = depth as i64;
                        if [d - n, d - m, d - m - n].iter().any(|&t| t > cap) {
                            continue;
                        }
                        for i in 0..w.piece_dim(depth) {
                            let v = WindowVec::basis_vector(depth, i);
                            let mut lhs = w.act(a, m, &w.act(b, n, &v)?)?;
                            lhs.add_scaled(&w.act(b, n, &w.act(a, m, &v)?)?, &Scalar::from_int(-1));
                            let mut rhs = WindowVec::new();
                            for (k, c) in &g.brackets[a][b].entries {
                                let mut term = w.act(*k, m + n, &v)?;
                                term.scale(c);
                                rhs.add_scaled(&term, &Scalar::one());
                            }
                            if m + n == 0 {
                                let form = g.pair_basis(a, b);
                                if !form.is_zero() {
                                    let c = Scalar::from_int(m) * form * w.level.clone();
                                    rhs.add_scaled(&v, &c);
                                }
                            }
                            lhs.add_scaled(&rhs, &Scalar::from_int(-1));
                            if !lhs.is_zero() {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Restrictedness within the window: a(n) w = 0 for every window vector w
/// at depth d and every n > d + (largest lowest-space mode).
pub fn check_restricted(w: &GradedModule) -> Result<bool> {
    let spill = w.max_lowest_mode();
    for d in 0..=w.depth_cap {
        for i in 0..w.piece_dim(d) {
            let v = WindowVec::basis_vector(d, i);
            for basis in 0..w.algebra.dim {
                for n in (d as i64 + spill + 1)..=(d as i64 + spill + 2) {
                    if !w.act(basis, n, &v)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Whether the window part of `w` is spanned by the ĝ-orbit of the listed
/// generating vectors (the induced-module cover of a finitely generated
/// lower-truncated module, within the window).
pub fn check_weyl_cover(w: &GradedModule, generators: &[(usize, usize)]) -> Result<bool> {
    use crate::linalg::{in_row_space, row_space_rref};
    let dims = w.graded_dims();
    let total: usize = dims.iter().sum();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, &n| {
            let off = *acc;
            *acc += n;
            Some(off)
        })
        .collect();
    let flat = |v: &WindowVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (d, c) in &v.comps {
            for (i, s) in &c.entries {
                out.set(offsets[*d] + i, s.clone());
            }
        }
        out
    };
    let mut span: Vec<SparseVec> = Vec::new();
    let mut frontier: Vec<WindowVec> = generators
        .iter()
        .map(|(d, i)| WindowVec::basis_vector(*d, *i))
        .collect();
    for v in &frontier {
        span.push(flat(v));
    }
    loop {
        let mut new_frontier = Vec::new();
        let basis_rref = row_space_rref(&span, total);
        for v in &frontier {
            for basis in 0..w.algebra.dim {
                for n in -(w.depth_cap as i64)..=(w.depth_cap as i64) {
                    let max_d = v.max_depth().unwrap_or(0) as i64;
                    if max_d - n > w.depth_cap as i64 {
                        continue;
                    }
                    let img = w.act(basis, n, v)?;
                    if img.is_zero() {
                        continue;
                    }
                    let f = flat(&img);
                    if !in_row_space(&basis_rref, &f) {
                        span.push(f);
                        new_frontier.push(img);
                    }
                }
            }
        }
        if new_frontier.is_empty() {
            break;
        }
        frontier = new_frontier;
    }
    let rank = row_space_rref(&span, total).len();
    Ok(rank == total)
}

/// JSON run description for building a module.
#[derive(Debug, Clone, Deserialize)]
pub struct ModuleSpec {
    /// "sl2", "sl3", ... or a path to a structure-constant table.
    pub algebra: String,
    /// "p/q" or "generic".
    pub kappa: String,
    pub lowest: LowestSpec,
    pub depth: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LowestSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub weight: Vec<i64>,
}

pub fn algebra_by_name(name: &str) -> Result<LieAlgebra> {
    if let Some(rest) = name.strip_prefix("sl") {
        if let Ok(n) = rest.parse::<usize>() {
            return liealg::build_sl(n);
        }
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| Error::InvalidInput(format!("cannot read algebra table {name}: {e}")))?;
    liealg::algebra_from_table(&text)
}

pub fn parse_kappa(s: &str) -> Result<Scalar> {
    if s == "generic" {
        Ok(Scalar::kappa())
    } else {
        Scalar::parse_rational(s)
    }
}

/// Builds a module from its JSON spec.
pub fn build_module(spec: &ModuleSpec) -> Result<GradedModule> {
    let algebra = Arc::new(algebra_by_name(&spec.algebra)?);
    let kappa = parse_kappa(&spec.kappa)?;
    let module = match spec.lowest.kind.as_str() {
        "trivial" => WeightModule::trivial(&algebra),
        "irrep" => liealg::highest_weight_module(&algebra, &spec.lowest.weight)?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown lowest space type {other:?}"
            )))
        }
    };
    induce(algebra, LowestSpace::plain(module), kappa, spec.depth)
}

/// Graded dimensions as CSV.
pub fn graded_dims_csv(w: &GradedModule) -> String {
    let mut out = String::from("depth,dimension\n");
    for (d, n) in w.graded_dims().iter().enumerate() {
        out.push_str(&format!("{d},{n}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_sl;

    fn sl2_module(kappa_num: i64, cap: usize) -> GradedModule {
        let g = Arc::new(build_sl(2).unwrap());
        let low = LowestSpace::plain(WeightModule::trivial(&g));
        induce(g, low, Scalar::from_int(kappa_num), cap).unwrap()
    }

    /// Independent counting oracle: graded dimensions of the vacuum module
    /// are the coefficients of prod_n (1-q^n)^{-dim g}.
    fn colored_partitions(dim_g: usize, cap: usize) -> Vec<usize> {
        let mut coeffs = vec![0usize; cap + 1];
        coeffs[0] = 1;
        for n in 1..=cap {
            for _color in 0..dim_g {
                for d in n..=cap {
                    coeffs[d] += coeffs[d - n];
                }
            }
        }
        coeffs
    }

    #[test]
    fn affine_bracket_examples() {
        let g = build_sl(2).unwrap();
        // basis order e=0, h=1, f=2
        let x = AffineElement::generator(0, 1); // e ⊗ t
        let y = AffineElement::generator(2, -1); // f ⊗ t^-1
        let br = affine_bracket(&g, &x, &y);
        // [e⊗t, f⊗t^-1] = h⊗1 + (e,f) k
        assert_eq!(br.terms.len(), 1);
        assert_eq!(br.terms.get(&(0, 1)), Some(&Scalar::one()));
        assert_eq!(br.central, Scalar::one());

        let k = AffineElement::central_element();
        assert!(affine_bracket(&g, &x, &k).is_zero());
        assert!(affine_bracket(&g, &k, &y).is_zero());

        let a = AffineElement::generator(0, 2);
        let b = AffineElement::generator(2, 3);
        assert!(affine_bracket(&g, &a, &b).central.is_zero());
    }

    #[test]
    fn completed_bracket_matches_affine_bracket() {
        let g = build_sl(2).unwrap();
        let e = SparseVec::unit(0);
        let f = SparseVec::unit(2);
        let t = TruncatedLaurentSeries::from_terms(vec![(1, Scalar::one())], -3, 5);
        let tinv = TruncatedLaurentSeries::from_terms(vec![(-1, Scalar::one())], -3, 5);
        let cb = completed_bracket(&g, &e, &t, &f, &tinv).unwrap();
        // {t, t^-1} = 1 and (e,f) = 1
        assert_eq!(cb.central, Scalar::one());
        assert_eq!(cb.element, SparseVec::unit(1));
        assert_eq!(cb.series.coeff(0).unwrap(), Scalar::one());

        // both series in t F[[t]]: zero central term
        let t2 = TruncatedLaurentSeries::from_terms(vec![(2, Scalar::one())], 1, 6);
        let t3 = TruncatedLaurentSeries::from_terms(vec![(3, Scalar::one())], 1, 6);
        let cb2 = completed_bracket(&g, &e, &t2, &f, &t3).unwrap();
        assert!(cb2.central.is_zero());
    }

    #[test]
    fn vacuum_module_graded_dims() {
        let w = sl2_module(-1, 3);
        assert_eq!(w.graded_dims(), colored_partitions(3, 3));
        assert_eq!(&w.graded_dims()[..3], &[1, 3, 9]);
    }

    #[test]
    fn weyl_module_graded_dims() {
        let g = Arc::new(build_sl(2).unwrap());
        let fund = liealg::highest_weight_module(&g, &[1]).unwrap();
        let w = induce(g, LowestSpace::plain(fund), Scalar::from_int(-1), 1).unwrap();
        assert_eq!(w.graded_dims(), vec![2, 6]);
    }

    #[test]
    fn positive_modes_annihilate_vacuum() {
        let w = sl2_module(-1, 2);
        for basis in 0..3 {
            let v = WindowVec::basis_vector(0, 0);
            assert!(w.act(basis, 1, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn straightening_examples() {
        // kappa = -1, h = 2, l = -3
        let w = sl2_module(-1, 2);
        let ell = Scalar::from_int(-3);
        assert_eq!(w.level, ell);
        let vac = WindowVec::basis_vector(0, 0);
        // e(1) f(-1) 1 = l 1
        let f_m1 = w.act(2, -1, &vac).unwrap();
        let back = w.act(0, 1, &f_m1).unwrap();
        let mut expect = vac.clone();
        expect.scale(&ell);
        assert_eq!(back, expect);
        // h(1) e(-1) 1 = 0
        let e_m1 = w.act(0, -1, &vac).unwrap();
        assert!(w.act(1, 1, &e_m1).unwrap().is_zero());
        // a(-2) 1 is a PBW basis vector
        let a_m2 = w.act(0, -2, &vac).unwrap();
        assert_eq!(a_m2.comps.len(), 1);
        assert_eq!(a_m2.component(2).entries.len(), 1);
    }

    #[test]
    fn out_of_window_is_an_error_not_zero() {
        let w = sl2_module(-1, 2);
        let v = WindowVec::basis_vector(2, 0);
        assert!(matches!(w.act(0, -1, &v), Err(Error::OutOfWindow(_))));
    }

    #[test]
    fn bracket_invariant_small() {
        let w = sl2_module(-1, 2);
        assert!(check_bracket_invariant(&w, 2).unwrap());
    }

    #[test]
    fn restrictedness_and_adversary() {
        let w = sl2_module(-1, 2);
        assert!(check_restricted(&w).unwrap());

        // adversarial raw module: a(2) nonzero on depth 0
        let g = Arc::new(build_sl(2).unwrap());
        let mut tables = BTreeMap::new();
        tables.insert(
            (0usize, 2i64),
            vec![vec![WindowVec::basis_vector(0, 0)]],
        );
        let adv = GradedModule::from_raw(
            g,
            Scalar::from_int(-1),
            Scalar::from_int(-3),
            &[1],
            tables,
        );
        assert!(!check_restricted(&adv).unwrap());
    }

    #[test]
    fn contragredient_dims_and_pairing() {
        let g = Arc::new(build_sl(2).unwrap());
        let w = Arc::new(
            induce(
                g.clone(),
                LowestSpace::plain(WeightModule::trivial(&g)),
                Scalar::from_int(-1),
                2,
            )
            .unwrap(),
        );
        let d = Arc::new(w.contragredient());
        assert_eq!(d.graded_dims(), w.graded_dims());
        let dd = d.contragredient();
        assert_eq!(dd.graded_dims(), w.graded_dims());

        // pairing identity <(a⊗tⁿ)λ, v> + (-1)ⁿ <λ, (a⊗t⁻ⁿ)v> = 0
        for basis in 0..3 {
            for n in [-2i64, -1, 1, 2] {
                for depth in 0..=2usize {
                    let td = depth as i64 - n;
                    if !(0..=2).contains(&td) {
                        continue;
                    }
                    for i in 0..d.piece_dim(depth) {
                        let lam = WindowVec::basis_vector(depth, i);
                        let alam = d.act(basis, n, &lam).unwrap();
                        for j in 0..w.piece_dim(td as usize) {
                            let wv = WindowVec::basis_vector(td as usize, j);
                            let awv = w.act(basis, -n, &wv).unwrap();
                            let lhs = alam.component(td as usize).get(j);
                            let rhs = awv.component(depth).get(i);
                            let sign = if n % 2 == 0 {
                                Scalar::one()
                            } else {
                                Scalar::from_int(-1)
                            };
                            assert!(
                                (lhs.clone() + sign * rhs).is_zero(),
                                "pairing identity fails basis {basis} mode {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_cover_of_vacuum_module() {
        let w = sl2_module(-1, 2);
        assert!(check_weyl_cover(&w, &[(0, 0)]).unwrap());
    }

    #[test]
    fn module_spec_build() {
        let spec = ModuleSpec {
            algebra: "sl2".into(),
            kappa: "-1".into(),
            lowest: LowestSpec {
                kind: "irrep".into(),
                weight: vec![1],
            },
            depth: 1,
        };
        let w = build_module(&spec).unwrap();
        assert_eq!(w.graded_dims(), vec![2, 6]);
        assert!(!w.kappa_warning);
        assert_eq!(graded_dims_csv(&w), "depth,dimension\n0,2\n1,6\n");
    }
}
