//! The function ring R = F[t, t⁻¹, (t−z)⁻¹] on the sphere punctured at
//! {∞, z, 0}, its expansions at the three punctures, the residue pairing,
//! and truncated Laurent series with explicit validity windows.
//!
//! Local coordinates: ε − z at z, 1/ε at ∞, ε at 0. An expansion at a
//! puncture is the power series of f composed with the inverse coordinate,
//! so ι_z tⁿ = (z+t)ⁿ, ι_∞ tⁿ = t⁻ⁿ, and ι_0 expands (t−z)⁻¹ in positive
//! powers of t.

use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// The three punctures of Q(z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Puncture {
    Zero,
    Z,
    Infinity,
}

/// Element of R = F[t, t⁻¹, (t−z)⁻¹]: a polynomial numerator over the
/// declared pole orders at 0 and z. Canonical form shares no factor t or
/// (t−z) between numerator and denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularFunction {
    /// Polynomial numerator, dense in increasing powers of t.
    pub num: Vec<Scalar>,
    /// Pole order at t = 0.
    pub pole0: usize,
    /// Pole order at t = z.
    pub polez: usize,
    /// The puncture location z (nonzero).
    pub z: Scalar,
}

fn poly_trim(v: &mut Vec<Scalar>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn poly_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Scalar::zero);
        let y = b.get(i).cloned().unwrap_or_else(Scalar::zero);
        out.push(x + y);
    }
    poly_trim(&mut out);
    out
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let v = out[i + j].clone() + x.clone() * y.clone();
            out[i + j] = v;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_eval(a: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in a.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// Divides `a` by (t − root) assuming the root is a zero of `a`.
fn poly_deflate(a: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    // synthetic division from the top
    let mut out = vec![Scalar::zero(); a.len().saturating_sub(1)];
    let mut carry = Scalar::zero();
    for i in (0..a.len()).rev() {
        let c = a[i].clone() + carry.clone() * root.clone();
        if i == 0 {
            debug_assert!(c.is_zero(), "deflation at a non-root");
        } else {
            out[i - 1] = c.clone();
            carry = c;
        }
    }
    poly_trim(&mut out);
    out
}

impl RegularFunction {
    pub fn zero(z: Scalar) -> Self {
        RegularFunction {
            num: vec![],
            pole0: 0,
            polez: 0,
            z,
        }
    }

    /// Builds c · t^a (t−z)^b for integers a, b and canonicalizes.
    pub fn monomial(z: Scalar, c: Scalar, a: i64, b: i64) -> Self {
        assert!(!z.is_zero(), "z must be nonzero");
        if c.is_zero() {
            return RegularFunction::zero(z);
        }
        let mut num = vec![c];
        let mut pole0 = 0usize;
        let mut polez = 0usize;
        if a >= 0 {
            let mut t = vec![Scalar::zero(); a as usize + 1];
            t[a as usize] = Scalar::one();
            num = poly_mul(&num, &t);
        } else {
            pole0 = (-a) as usize;
        }
        if b >= 0 {
            for _ in 0..b {
                num = poly_mul(&num, &[-z.clone(), Scalar::one()]);
            }
        } else {
            polez = (-b) as usize;
        }
        let mut f = RegularFunction {
            num,
            pole0,
            polez,
            z,
        };
        f.canonicalize();
        f
    }

    pub fn t_power(z: Scalar, n: i64) -> Self {
        RegularFunction::monomial(z, Scalar::one(), n, 0)
    }

    pub fn tz_power(z: Scalar, n: i64) -> Self {
        RegularFunction::monomial(z, Scalar::one(), 0, n)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn canonicalize(&mut self) {
        if self.num.is_empty() {
            self.pole0 = 0;
            self.polez = 0;
            return;
        }
        while self.pole0 > 0 && self.num.first().map_or(false, |c| c.is_zero()) {
            self.num.remove(0);
            self.pole0 -= 1;
        }
        while self.polez > 0 && poly_eval(&self.num, &self.z).is_zero() {
            self.num = poly_deflate(&self.num, &self.z);
            self.polez -= 1;
        }
    }

    pub fn add(&self, rhs: &RegularFunction) -> RegularFunction {
        assert_eq!(self.z, rhs.z, "mismatched puncture data");
        let p0 = self.pole0.max(rhs.pole0);
        let pz = self.polez.max(rhs.polez);
        let lift = |f: &RegularFunction| -> Vec<Scalar> {
            let mut n = f.num.clone();
            if p0 > f.pole0 {
                let mut t = vec![Scalar::zero(); p0 - f.pole0 + 1];
                t[p0 - f.pole0] = Scalar::one();
                n = poly_mul(&n, &t);
            }
            for _ in 0..(pz - f.polez) {
                n = poly_mul(&n, &[-f.z.clone(), Scalar::one()]);
            }
            n
        };
        let mut out = RegularFunction {
            num: poly_add(&lift(self), &lift(rhs)),
            pole0: p0,
            polez: pz,
            z: self.z.clone(),
        };
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> RegularFunction {
        RegularFunction {
            num: self.num.iter().map(|c| -c.clone()).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, rhs: &RegularFunction) -> RegularFunction {
        assert_eq!(self.z, rhs.z, "mismatched puncture data");
        let mut out = RegularFunction {
            num: poly_mul(&self.num, &rhs.num),
            pole0: self.pole0 + rhs.pole0,
            polez: self.polez + rhs.polez,
            z: self.z.clone(),
        };
        out.canonicalize();
        out
    }

    pub fn scale(&self, c: &Scalar) -> RegularFunction {
        let mut out = RegularFunction {
            num: self.num.iter().map(|a| a.clone() * c.clone()).collect(),
            ..self.clone()
        };
        if c.is_zero() {
            out = RegularFunction::zero(self.z.clone());
        }
        out
    }

    /// d/dt in the global coordinate.
    pub fn derivative(&self) -> RegularFunction {
        // d/dt [ N / (t^a (t-z)^b) ]
        //   = [ N' t (t-z) - a N (t-z) - b N t ] / (t^{a+1} (t-z)^{b+1})
        let a = self.pole0 as i64;
        let b = self.polez as i64;
        let nprime: Vec<Scalar> = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * Scalar::from_int(i as i64))
            .collect();
        let t = vec![Scalar::zero(), Scalar::one()];
        let tz = vec![-self.z.clone(), Scalar::one()];
        let mut num = poly_mul(&poly_mul(&nprime, &t), &tz);
        num = poly_add(
            &num,
            &poly_mul(&self.num, &tz)
                .iter()
                .map(|c| c.clone() * Scalar::from_int(-a))
                .collect::<Vec<_>>(),
        );
        num = poly_add(
            &num,
            &poly_mul(&self.num, &t)
                .iter()
                .map(|c| c.clone() * Scalar::from_int(-b))
                .collect::<Vec<_>>(),
        );
        let mut out = RegularFunction {
            num,
            pole0: self.pole0 + 1,
            polez: self.polez + 1,
            z: self.z.clone(),
        };
        out.canonicalize();
        out
    }

    /// Lowest mode of the expansion at the given puncture.
    pub fn lowest_mode(&self, at: Puncture) -> i64 {
        if self.is_zero() {
            return 0;
        }
        let deg_lo = self.num.iter().position(|c| !c.is_zero()).unwrap() as i64;
        let deg_hi = self.num.len() as i64 - 1;
        match at {
            Puncture::Zero => deg_lo - self.pole0 as i64,
            Puncture::Z => {
                // order of vanishing of the numerator at z (canonical form
                // guarantees polez = 0 when it is positive)
                let mut order = 0i64;
                let mut num = self.num.clone();
                while !num.is_empty() && poly_eval(&num, &self.z).is_zero() {
                    num = poly_deflate(&num, &self.z);
                    order += 1;
                }
                order - self.polez as i64
            }
            Puncture::Infinity => -(deg_hi) + self.pole0 as i64 + self.polez as i64,
        }
    }
}

impl fmt::Display for RegularFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})t^{i}"))
            .collect();
        write!(f, "[{}]", terms.join(" + "))?;
        if self.pole0 > 0 {
            write!(f, "/t^{}", self.pole0)?;
        }
        if self.polez > 0 {
            write!(f, "/(t-z)^{}", self.polez)?;
        }
        Ok(())
    }
}

/// Truncated Laurent series with an explicit validity window.
///
/// Coefficients are known for modes in `[lo, hi]`; modes above `hi` are
/// unknown, not zero. Modes below `lo` are known to vanish when
/// `zero_below` is set (true for expansions of honest functions), and
/// unknown otherwise (boundary truncations in the vanishing-lemma harness).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLaurentSeries {
    pub coeffs: BTreeMap<i64, Scalar>,
    pub lo: i64,
    pub hi: i64,
    pub zero_below: bool,
}

impl TruncatedLaurentSeries {
    pub fn zero(lo: i64, hi: i64) -> Self {
        TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            zero_below: true,
        }
    }

    pub fn from_terms(terms: Vec<(i64, Scalar)>, lo: i64, hi: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            assert!(n >= lo && n <= hi, "term outside declared window");
            if !c.is_zero() {
                coeffs.insert(n, c);
            }
        }
        TruncatedLaurentSeries {
            coeffs,
            lo,
            hi,
            zero_below: true,
        }
    }

    /// Coefficient of tⁿ, or None when n lies outside the validity window.
    pub fn coeff(&self, n: i64) -> Option<Scalar> {
        if n > self.hi {
            return None;
        }
        if n < self.lo {
            return if self.zero_below {
                Some(Scalar::zero())
            } else {
                None
            };
        }
        Some(self.coeffs.get(&n).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn set(&mut self, n: i64, c: Scalar) {
        assert!(n >= self.lo && n <= self.hi);
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &TruncatedLaurentSeries) -> TruncatedLaurentSeries {
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi.min(rhs.hi);
        let zero_below = self.zero_below && rhs.zero_below;
        let mut out = TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            zero_below,
        };
        for n in lo..=hi {
            let a = self.coeff(n).unwrap_or_else(Scalar::zero);
            let b = rhs.coeff(n).unwrap_or_else(Scalar::zero);
            let c = a + b;
            if !c.is_zero() {
                out.coeffs.insert(n, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TruncatedLaurentSeries {
        let mut out = self.clone();
        out.coeffs = out
            .coeffs
            .into_iter()
            .map(|(n, a)| (n, a * c.clone()))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        out
    }

    pub fn neg(&self) -> TruncatedLaurentSeries {
        self.scale(&Scalar::from_int(-1))
    }

    /// Product with the tightest implied validity window.
    ///
    /// With zero-below series of windows [a₁,b₁], [a₂,b₂], the coefficient
    /// at n needs all pairs (j, n−j) with j ≥ a₁ and n−j ≥ a₂, so it is
    /// known through min(a₁+b₂, a₂+b₁).
    pub fn mul(&self, rhs: &TruncatedLaurentSeries) -> TruncatedLaurentSeries {
        assert!(
            self.zero_below && rhs.zero_below,
            "product needs zero-below operands"
        );
        let lo = self.lo + rhs.lo;
        let hi = (self.lo + rhs.hi).min(rhs.lo + self.hi);
        let mut out = TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            zero_below: true,
        };
        if hi < lo {
            return out;
        }
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                let n = i + j;
                if n < lo || n > hi {
                    continue;
                }
                let v = out.coeffs.remove(&n).unwrap_or_else(Scalar::zero) + a.clone() * b.clone();
                if v.is_zero() {
                    out.coeffs.remove(&n);
                } else {
                    out.coeffs.insert(n, v);
                }
            }
        }
        out
    }

    /// Multiplication by an exact Laurent polynomial (finite, fully known).
    /// The window loses only the polynomial's span below its top:
    /// coefficient n needs series modes n − j for j in the support, so it is
    /// known through hi + min(support).
    pub fn mul_exact_poly(&self, poly: &[(i64, Scalar)]) -> TruncatedLaurentSeries {
        let support: Vec<&(i64, Scalar)> = poly.iter().filter(|(_, c)| !c.is_zero()).collect();
        if support.is_empty() {
            return TruncatedLaurentSeries::zero(self.lo, self.hi);
        }
        let jmin = support.iter().map(|(j, _)| *j).min().unwrap();
        let jmax = support.iter().map(|(j, _)| *j).max().unwrap();
        // coefficient n needs series modes n-j for j in [jmin, jmax]:
        // known above iff n - jmin <= hi; known below iff zero_below or
        // n - jmax >= lo.
        let lo = if self.zero_below {
            self.lo + jmin
        } else {
            self.lo + jmax
        };
        let hi = self.hi + jmin;
        let mut out = TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            zero_below: self.zero_below,
        };
        for n in lo..=hi {
            let mut acc = Scalar::zero();
            for (j, c) in &support {
                let a = self.coeff(n - j).expect("window arithmetic keeps this known");
                acc += a * c.clone();
            }
            if !acc.is_zero() {
                out.coeffs.insert(n, acc);
            }
        }
        out
    }

    /// d/dt of the expansion, in the same local coordinate.
    pub fn derivative(&self) -> TruncatedLaurentSeries {
        let mut out = TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo: self.lo - 1,
            hi: self.hi - 1,
            zero_below: self.zero_below,
        };
        for (n, c) in &self.coeffs {
            if *n == 0 {
                continue;
            }
            out.coeffs.insert(n - 1, c.clone() * Scalar::from_int(*n));
        }
        out
    }

    /// Coefficient of t⁻¹ if it lies in the validity window.
    pub fn residue(&self) -> Result<Scalar> {
        self.coeff(-1)
            .ok_or_else(|| Error::OutOfWindow("residue outside validity window".into()))
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> TruncatedLaurentSeries {
        let mut out = TruncatedLaurentSeries {
            coeffs: BTreeMap::new(),
            lo: lo.max(self.lo),
            hi: hi.min(self.hi),
            zero_below: self.zero_below && lo <= self.lo,
        };
        for (n, c) in &self.coeffs {
            if *n >= out.lo && *n <= out.hi {
                out.coeffs.insert(*n, c.clone());
            }
        }
        out
    }
}

/// Expansion of f at the puncture, valid through mode `order`.
///
/// Rejects z = 0 since the punctures must be distinct.
pub fn iota_expand(f: &RegularFunction, at: Puncture, order: i64) -> Result<TruncatedLaurentSeries> {
    if f.z.is_zero() {
        return Err(Error::InvalidInput("puncture z must be nonzero".into()));
    }
    if f.is_zero() {
        return Ok(TruncatedLaurentSeries::zero(0, order));
    }
    let lowest = f.lowest_mode(at);
    if order < lowest {
        return Err(Error::OutOfWindow(format!(
            "expansion order {order} below lowest mode {lowest}"
        )));
    }
    let z = &f.z;
    let mut out = TruncatedLaurentSeries::zero(lowest, order);

    // helper: accumulate c * t^n
    let put = |n: i64, c: Scalar, out: &mut TruncatedLaurentSeries| {
        if n > out.hi || c.is_zero() {
            return;
        }
        let v = out.coeffs.remove(&n).unwrap_or_else(Scalar::zero) + c;
        if !v.is_zero() {
            out.coeffs.insert(n, v);
        }
    };

    match at {
        Puncture::Zero => {
            // N(t) t^{-a} (t-z)^{-b}; (t-z)^{-1} = -z^{-1} sum (t/z)^i
            // Expand (t-z)^{-b} = (-z)^{-b} (1 - t/z)^{-b}
            //                   = (-z)^{-b} sum C(-b,i) (-t/z)^i.
            let b = f.polez as i64;
            let zinv = z.inv()?;
            let base = (-z.clone()).pow(-b)?;
            for (i, c) in f.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let n0 = i as i64 - f.pole0 as i64;
                if b == 0 {
                    put(n0, c.clone(), &mut out);
                    continue;
                }
                let mut k = 0i64;
                loop {
                    let n = n0 + k;
                    if n > order {
                        break;
                    }
                    let coef = binomial(-b, k as u64)
                        * (-zinv.clone()).pow(k)?
                        * base.clone()
                        * c.clone();
                    put(n, coef, &mut out);
                    k += 1;
                }
            }
        }
        Puncture::Z => {
            // substitute t -> u + z: numerator N(u+z) binomially,
            // t^{-a} -> (u+z)^{-a} expanded in u, (t-z)^{-b} -> u^{-b}.
            let a = f.pole0 as i64;
            let b = f.polez as i64;
            // N(u+z) as a polynomial in u
            let mut nu = vec![Scalar::zero(); f.num.len().max(1)];
            for (i, c) in f.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // (u+z)^i = sum_j C(i,j) u^j z^{i-j}
                for j in 0..=i {
                    let coef = binomial(i as i64, j as u64) * z.pow((i - j) as i64)? * c.clone();
                    let v = nu[j].clone() + coef;
                    nu[j] = v;
                }
            }
            // (u+z)^{-a} = z^{-a} sum C(-a,i) (u/z)^i
            let zinv = z.inv()?;
            for (j, c) in nu.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let n0 = j as i64 - b;
                if a == 0 {
                    put(n0, c.clone(), &mut out);
                    continue;
                }
                let base = z.pow(-a)?;
                let mut k = 0i64;
                loop {
                    let n = n0 + k;
                    if n > order {
                        break;
                    }
                    let coef =
                        binomial(-a, k as u64) * zinv.pow(k)? * base.clone() * c.clone();
                    put(n, coef, &mut out);
                    k += 1;
                }
            }
        }
        Puncture::Infinity => {
            // substitute t -> 1/u:
            //   N(1/u) = sum c_i u^{-i},
            //   t^{-a} -> u^{a},
            //   (t-z)^{-b} = (1/u - z)^{-b} = u^b (1 - z u)^{-b}
            //             = u^b sum C(-b,i) (-z u)^i.
            let a = f.pole0 as i64;
            let b = f.polez as i64;
            for (i, c) in f.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let n0 = -(i as i64) + a + b;
                if b == 0 {
                    put(n0, c.clone(), &mut out);
                    continue;
                }
                let mut k = 0i64;
                loop {
                    let n = n0 + k;
                    if n > order {
                        break;
                    }
                    let coef = binomial(-b, k as u64) * (-z.clone()).pow(k)? * c.clone();
                    put(n, coef, &mut out);
                    k += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Residue pairing {f1, f2} at a puncture: the t⁻¹ coefficient of
/// (ι f2)·d(ι f1)/dt in the local coordinate.
pub fn residue_pair(f1: &RegularFunction, f2: &RegularFunction, at: Puncture) -> Result<Scalar> {
    if f1.z.is_zero() {
        return Err(Error::InvalidInput("puncture z must be nonzero".into()));
    }
    if f1.is_zero() || f2.is_zero() {
        return Ok(Scalar::zero());
    }
    let lo1 = f1.lowest_mode(at);
    let lo2 = f2.lowest_mode(at);
    // residue of g2 * g1' needs modes of g2 through -lo1 and of g1 through
    // -lo2 + 1; add slack of 1 for safety.
    let e1 = iota_expand(f1, at, (-lo2 + 2).max(lo1))?;
    let e2 = iota_expand(f2, at, (-lo1 + 2).max(lo2))?;
    let prod = e2.mul(&e1.derivative());
    prod.residue()
}

/// Coefficients C(n, 0), ..., C(n, count−1) of the generalized binomial.
pub fn binomial_coefficients(n: i64, count: usize) -> Vec<Scalar> {
    assert!(count >= 1);
    (0..count).map(|i| binomial(n, i as u64)).collect()
}

/// Cross-check of the vanishing lemma conclusion: whether
/// (x+ξ)^{N1+N2+s} f_{K−1−s} = 0 within the validity window.
///
/// The caller is responsible for verifying the hypothesis (use
/// [`vanishing_hypothesis_holds`]); this is a checker, not an inference
/// engine. `fs[k]` is f_k and f_k = 0 for k ≥ fs.len().
pub fn check_vanishing_lemma(
    fs: &[TruncatedLaurentSeries],
    xi: &Scalar,
    n1: u32,
    n2: u32,
    s: u32,
) -> Result<bool> {
    if fs.is_empty() {
        return Ok(true);
    }
    let k = fs.len();
    if (s as usize) >= k {
        // f_{K-1-s} is identically zero by hypothesis
        return Ok(true);
    }
    let target = &fs[k - 1 - s as usize];
    let lo = fs.iter().map(|f| f.lo).min().unwrap();
    let hi = fs.iter().map(|f| f.hi).max().unwrap();
    for f in fs {
        if f.lo != lo || f.hi != hi {
            return Err(Error::OutOfWindow(
                "inconsistent truncation windows in vanishing lemma input".into(),
            ));
        }
    }
    let poly = expand_x_plus_xi_pow(xi, (n1 + n2 + s) as i64)?;
    let prod = target.mul_exact_poly(&poly);
    Ok(prod.is_zero_on_window())
}

/// Verifies the vanishing lemma hypothesis in its coefficient form:
/// Σ_{i=0}^{N2} C(N2, i) (x+ξ)^{N1+N2−i} f_{i+k} = 0 within the window,
/// for every k.
pub fn vanishing_hypothesis_holds(
    fs: &[TruncatedLaurentSeries],
    xi: &Scalar,
    n1: u32,
    n2: u32,
) -> Result<bool> {
    if fs.is_empty() {
        return Ok(true);
    }
    let kk = fs.len() as i64;
    for k in -(n2 as i64)..kk {
        let mut acc: Option<TruncatedLaurentSeries> = None;
        for i in 0..=n2 as i64 {
            let idx = i + k;
            if idx < 0 || idx >= kk {
                continue;
            }
            let f = &fs[idx as usize];
            let c = binomial(n2 as i64, i as u64);
            if c.is_zero() {
                continue;
            }
            let pow = expand_x_plus_xi_pow(xi, (n1 + n2) as i64 - i)?;
            let term = f.mul_exact_poly(&pow).scale(&c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        if let Some(a) = acc {
            if !a.is_zero_on_window() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn expand_x_plus_xi_pow(xi: &Scalar, e: i64) -> Result<Vec<(i64, Scalar)>> {
    if e < 0 {
        return Err(Error::InvalidInput(
            "negative powers of (x+xi) are not representable here".into(),
        ));
    }
    let mut out = Vec::new();
    for j in 0..=e {
        let c = binomial(e, j as u64) * xi.pow(e - j)?;
        out.push((j, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> Scalar {
        Scalar::one()
    }

    #[test]
    fn residue_examples_at_zero() {
        // {t, t^-1} at 0 = Res(t^-1 * 1) = 1
        let f1 = RegularFunction::t_power(z1(), 1);
        let f2 = RegularFunction::t_power(z1(), -1);
        assert_eq!(residue_pair(&f1, &f2, Puncture::Zero).unwrap(), Scalar::one());
        // {t^2, t} at 0 = 0: 2t^2 has no t^-1 term
        let g1 = RegularFunction::t_power(z1(), 2);
        let g2 = RegularFunction::t_power(z1(), 1);
        assert_eq!(residue_pair(&g1, &g2, Puncture::Zero).unwrap(), Scalar::zero());
        // antisymmetry forces {t^-1, t} = -1
        assert_eq!(
            residue_pair(&f2, &f1, Puncture::Zero).unwrap(),
            Scalar::from_int(-1)
        );
    }

    #[test]
    fn iota_z_of_t_powers_is_binomial() {
        // iota_z t^n = (z+t)^n
        for n in [1i64, 2, 3] {
            let f = RegularFunction::t_power(z1(), n);
            let e = iota_expand(&f, Puncture::Z, n + 1).unwrap();
            for j in 0..=n {
                assert_eq!(
                    e.coeff(j).unwrap(),
                    binomial(n, j as u64),
                    "coefficient of t^{j} in (1+t)^{n}"
                );
            }
        }
    }

    #[test]
    fn iota_zero_of_tz_inverse_is_geometric() {
        // (t-z)^{-1} at 0, order 2: -z^{-1} - z^{-2} t - z^{-3} t^2
        let z = Scalar::from_int(2);
        let f = RegularFunction::tz_power(z.clone(), -1);
        let e = iota_expand(&f, Puncture::Zero, 2).unwrap();
        assert_eq!(e.coeff(0).unwrap(), Scalar::from_ratio(-1, 2));
        assert_eq!(e.coeff(1).unwrap(), Scalar::from_ratio(-1, 4));
        assert_eq!(e.coeff(2).unwrap(), Scalar::from_ratio(-1, 8));
    }

    #[test]
    fn iota_infinity_inverts_t() {
        let f = RegularFunction::t_power(z1(), 3);
        let e = iota_expand(&f, Puncture::Infinity, 0).unwrap();
        assert_eq!(e.coeff(-3).unwrap(), Scalar::one());
        assert!(e.coeff(-2).unwrap().is_zero());
    }

    #[test]
    fn binomial_rows() {
        assert_eq!(
            binomial_coefficients(-1, 3),
            vec![Scalar::from_int(1), Scalar::from_int(-1), Scalar::from_int(1)]
        );
        assert_eq!(
            binomial_coefficients(2, 4),
            vec![
                Scalar::from_int(1),
                Scalar::from_int(2),
                Scalar::from_int(1),
                Scalar::zero()
            ]
        );
        assert_eq!(
            binomial_coefficients(-2, 3),
            vec![Scalar::from_int(1), Scalar::from_int(-2), Scalar::from_int(3)]
        );
    }

    #[test]
    fn expansion_is_ring_homomorphism_on_window() {
        let z = Scalar::from_ratio(2, 3);
        let f = RegularFunction::monomial(z.clone(), Scalar::from_int(2), -1, 1);
        let g = RegularFunction::monomial(z.clone(), Scalar::one(), 1, -2);
        for at in [Puncture::Zero, Puncture::Z, Puncture::Infinity] {
            let ef = iota_expand(&f, at, 6).unwrap();
            let eg = iota_expand(&g, at, 6).unwrap();
            let eprod = iota_expand(&f.mul(&g), at, 6).unwrap();
            let prod = ef.mul(&eg);
            for n in prod.lo..=prod.hi {
                assert_eq!(prod.coeff(n), eprod.coeff(n), "mode {n} at {at:?}");
            }
        }
    }

    #[test]
    fn vanishing_lemma_zero_family() {
        let fs = vec![TruncatedLaurentSeries::zero(-2, 4); 3];
        assert!(vanishing_hypothesis_holds(&fs, &Scalar::from_int(-1), 1, 1).unwrap());
        assert!(check_vanishing_lemma(&fs, &Scalar::from_int(-1), 1, 1, 0).unwrap());
    }

    #[test]
    fn vanishing_lemma_rejects_negative_power_representation() {
        let e = expand_x_plus_xi_pow(&Scalar::one(), -2);
        assert!(e.is_err());
    }

    #[test]
    fn vanishing_lemma_delta_instance() {
        // f_0 = truncation of the two-sided series annihilated by (x+xi):
        // sum_n (-xi)^{-n} x^n. The hypothesis and conclusion hold on the
        // interior of the window (boundary modes are marked unknown via
        // zero_below = false).
        let xi = Scalar::from_int(-2); // xi = -z with z = 2
        let lo = -3i64;
        let hi = 3i64;
        let mut f0 = TruncatedLaurentSeries::zero(lo, hi);
        f0.zero_below = false;
        for n in lo..=hi {
            f0.set(n, (-xi.clone()).pow(-n).unwrap());
        }
        // (x+xi) f0 should vanish on the known window
        let prod = f0.mul_exact_poly(&[(0, xi.clone()), (1, Scalar::one())]);
        assert!(prod.is_zero_on_window());
        let fs = vec![f0];
        assert!(vanishing_hypothesis_holds(&fs, &xi, 1, 0).unwrap());
        assert!(check_vanishing_lemma(&fs, &xi, 1, 0, 0).unwrap());
    }
}
