//! Residue fields of `O_F` and reductions of the cubic coefficient field.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{CoeffField, CoeffFieldElem, FieldElem, IntElem, PrimeIdealF, RqError, SplitKind};
use crate::exactlin::modp::{invmod, mulmod, powmod};

/// An element `c0 + c1·t` of a residue field; `c1 = 0` in degree 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq {
    pub c0: u64,
    pub c1: u64,
}

/// `𝔽_p` (split or ramified prime, `φ ↦ phi`) or `𝔽_p[t]/(t² − t − 1)`
/// (inert prime, `φ ↦ t`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    degree: u8,
    phi: u64,
}

impl ResidueField {
    /// Residue field of a prime ideal.
    pub fn of(prime: &PrimeIdealF) -> Self {
        let p = prime.p;
        match prime.kind {
            SplitKind::Inert => ResidueField { p, degree: 2, phi: 0 },
            _ => {
                // the generator c + dφ vanishes, so φ ≡ −c/d
                let c = prime.gen.a.rem_euclid(p as i64) as u64;
                let d = prime.gen.b.rem_euclid(p as i64) as u64;
                let phi = mulmod(p - c % p, invmod(d, p), p) % p;
                ResidueField { p, degree: 1, phi }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        if self.degree == 1 {
            self.p
        } else {
            self.p * self.p
        }
    }

    pub fn zero(&self) -> Fq {
        Fq { c0: 0, c1: 0 }
    }

    pub fn one(&self) -> Fq {
        Fq { c0: 1 % self.p, c1: 0 }
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq { c0: n.rem_euclid(self.p as i64) as u64, c1: 0 }
    }

    /// Image of `φ`.
    pub fn phi(&self) -> Fq {
        if self.degree == 1 {
            Fq { c0: self.phi, c1: 0 }
        } else {
            Fq { c0: 0, c1: 1 }
        }
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq { c0: (x.c0 + y.c0) % self.p, c1: (x.c1 + y.c1) % self.p }
    }

    pub fn neg(&self, x: Fq) -> Fq {
        Fq { c0: (self.p - x.c0) % self.p, c1: (self.p - x.c1) % self.p }
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        if self.degree == 1 {
            return Fq { c0: mulmod(x.c0, y.c0, p), c1: 0 };
        }
        // t² = t + 1
        let hh = mulmod(x.c1, y.c1, p);
        Fq {
            c0: (mulmod(x.c0, y.c0, p) + hh) % p,
            c1: (mulmod(x.c0, y.c1, p) + mulmod(x.c1, y.c0, p) + hh) % p,
        }
    }

    pub fn pow(&self, mut x: Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Norm to the prime field.
    pub fn norm(&self, x: Fq) -> u64 {
        let p = self.p;
        if self.degree == 1 {
            return x.c0;
        }
        // N(c0 + c1 t) = c0² + c0 c1 − c1²
        (mulmod(x.c0, x.c0, p) + mulmod(x.c0, x.c1, p) + p - mulmod(x.c1, x.c1, p)) % p
    }

    pub fn inv(&self, x: Fq) -> Option<Fq> {
        let n = self.norm(x);
        if n == 0 {
            return None;
        }
        let ni = invmod(n, self.p);
        if self.degree == 1 {
            return Some(Fq { c0: ni, c1: 0 });
        }
        // conjugate of c0 + c1 t is (c0 + c1) − c1 t
        let c = Fq { c0: (x.c0 + x.c1) % self.p, c1: (self.p - x.c1) % self.p };
        Some(self.mul(c, Fq { c0: ni, c1: 0 }))
    }

    /// Quadratic character for odd characteristic: `1`, `-1`, or `0` at zero.
    pub fn quadratic_character(&self, x: Fq) -> i32 {
        let n = self.norm(x);
        if n == 0 {
            return 0;
        }
        // squares of 𝔽_{p²} are exactly the elements with square norm
        if powmod(n, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// All elements, `c0` varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let p = self.p;
        let top = if self.degree == 1 { 1 } else { p };
        (0..top).flat_map(move |c1| (0..p).map(move |c0| Fq { c0, c1 }))
    }

    pub fn reduce(&self, x: &IntElem) -> Fq {
        self.add(self.from_int(x.a), self.mul(self.from_int(x.b), self.phi()))
    }

    fn reduce_rational(&self, r: &BigRational) -> Result<Fq, RqError> {
        let pm = BigInt::from(self.p);
        let num = (r.numer() % &pm + &pm) % &pm;
        let den = (r.denom() % &pm + &pm) % &pm;
        let (num, den) = (num.to_u64().unwrap_or(0), den.to_u64().unwrap_or(0));
        if den == 0 {
            return Err(RqError::NotIntegral);
        }
        Ok(Fq { c0: mulmod(num, invmod(den, self.p), self.p), c1: 0 })
    }

    /// Reduction of an element whose coordinate denominators are prime to `p`.
    pub fn reduce_field(&self, x: &FieldElem) -> Result<Fq, RqError> {
        let a = self.reduce_rational(&x.a)?;
        let b = self.reduce_rational(&x.b)?;
        Ok(self.add(a, self.mul(b, self.phi())))
    }
}

/// Reduction of the cubic coefficient field modulo a prime above `𝔭`.
///
/// With `scale = k`, the map sends `u = w/p^k` to `root`, so an element
/// `Σ cᵢwⁱ` reduces to `Σ red(cᵢpⁱᵏ)·rootⁱ`. Scaling reaches the primes of
/// the coefficient field whose roots of the minimal polynomial have
/// valuation `k` when `O_F[w]` is not maximal there; it is used at inert
/// `𝔭` only, where `p` is a uniformizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMap {
    pub prime: PrimeIdealF,
    pub field: ResidueField,
    /// Image of the generator `w`; zero when `scale > 0`.
    pub w: Fq,
    pub scale: u32,
    /// Image of `w/p^scale`.
    pub root: Fq,
    /// Multiplicity of `root` in the residual polynomial.
    pub multiplicity: u32,
}

/// `v_p` of a rational, `None` at zero.
fn val_rational(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let pm = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0;
        while (&n % &pm).is_zero() {
            n /= &pm;
            v += 1;
        }
        v
    };
    Some(count(r.numer().clone()) - count(r.denom().clone()))
}

/// `v_𝔭` at an inert `𝔭 = (p)`, where it is the minimum over the `φ`-coordinates.
fn val_inert(x: &FieldElem, p: u64) -> Option<i64> {
    match (val_rational(&x.a, p), val_rational(&x.b, p)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn times_power(x: &FieldElem, p: u64, e: i64) -> FieldElem {
    let pe = BigRational::from_integer(BigInt::from(p).pow(e.unsigned_abs() as u32));
    let s = if e >= 0 { pe } else { pe.recip() };
    FieldElem::new(&x.a * &s, &x.b * &s)
}

impl ResidueMap {
    /// Reduces `cf` at `prime`, sending `w/p^k` to the unique nonzero root of
    /// multiplicity at least `min_multiplicity` among the residual polynomials
    /// of the Newton polygon slopes `k` (`k = 0` only, and zero roots
    /// allowed, away from inert primes).
    pub fn new(cf: &CoeffField, prime: &PrimeIdealF, min_multiplicity: u32) -> Result<Self, RqError> {
        let field = ResidueField::of(prime);
        let c = cf.minpoly();
        let p = prime.p;
        let inert = prime.kind == SplitKind::Inert;
        // root valuations are bounded by v(c₀)
        let max_scale = if inert { val_inert(&c[0], p).unwrap_or(0).max(0) as u32 } else { 0 };
        let mut found = Vec::new();
        for k in 0..=max_scale {
            let poly = Self::residual(cf, &field, p, k)?;
            for r in field.elements() {
                if inert && r == field.zero() {
                    continue;
                }
                let m = root_multiplicity(&field, &poly, r);
                if m >= min_multiplicity {
                    found.push((k, r, m));
                }
            }
        }
        match found.as_slice() {
            [] => Err(RqError::NoRoot(min_multiplicity)),
            [(k, r, m)] => {
                let w = if *k == 0 { *r } else { field.zero() };
                Ok(ResidueMap { prime: *prime, field, w, scale: *k, root: *r, multiplicity: *m })
            }
            _ => Err(RqError::AmbiguousRoot(min_multiplicity)),
        }
    }

    /// The map at the unique prime above `(√5)`; the cubic is totally
    /// ramified there.
    pub fn lambda(cf: &CoeffField) -> Result<Self, RqError> {
        Self::new(cf, &PrimeIdealF::sqrt5(), 3)
    }

    /// The map at the prime above `(2)` occurring squared.
    pub fn q1(cf: &CoeffField) -> Result<Self, RqError> {
        Self::new(cf, &super::splitting_type(2)?.1[0], 2)
    }

    /// Residual polynomial of slope `k`: the reduction of
    /// `p^{−m}·minpoly(pᵏy)` with `m` the least valuation of its coefficients.
    fn residual(cf: &CoeffField, field: &ResidueField, p: u64, k: u32) -> Result<[Fq; 4], RqError> {
        let c = cf.minpoly();
        let coeffs = [c[0].clone(), c[1].clone(), c[2].clone(), FieldElem::one()];
        if k == 0 {
            return Ok([field.reduce_field(&coeffs[0])?, field.reduce_field(&coeffs[1])?, field.reduce_field(&coeffs[2])?, field.one()]);
        }
        let shifted: Vec<FieldElem> = coeffs.iter().enumerate().map(|(i, x)| times_power(x, p, i as i64 * k as i64)).collect();
        let m = shifted.iter().filter_map(|x| val_inert(x, p)).min().unwrap_or(0);
        let mut out = [field.zero(); 4];
        for (i, x) in shifted.iter().enumerate() {
            out[i] = field.reduce_field(&times_power(x, p, -m))?;
        }
        Ok(out)
    }

    fn reduced_minpoly_in(cf: &CoeffField, field: &ResidueField) -> Result<[Fq; 4], RqError> {
        let c = cf.minpoly();
        Ok([field.reduce_field(&c[0])?, field.reduce_field(&c[1])?, field.reduce_field(&c[2])?, field.one()])
    }

    /// Coefficients of the reduced minimal polynomial, constant term first.
    pub fn reduced_minpoly(&self, cf: &CoeffField) -> Result<[Fq; 4], RqError> {
        Self::reduced_minpoly_in(cf, &self.field)
    }

    pub fn apply_base(&self, x: &FieldElem) -> Result<Fq, RqError> {
        self.field.reduce_field(x)
    }

    /// Fails with [`RqError::NotIntegral`] when some `cᵢpⁱᵏ` is not
    /// integral at the prime.
    pub fn apply(&self, x: &CoeffFieldElem) -> Result<Fq, RqError> {
        let f = &self.field;
        let mut acc = f.zero();
        for (i, c) in x.coords().iter().enumerate().rev() {
            let c = if self.scale == 0 { f.reduce_field(c)? } else { f.reduce_field(&times_power(c, self.prime.p, i as i64 * self.scale as i64))? };
            acc = f.add(f.mul(acc, self.root), c);
        }
        Ok(acc)
    }
}

fn root_multiplicity(f: &ResidueField, poly: &[Fq], r: Fq) -> u32 {
    let mut q: Vec<Fq> = poly.to_vec();
    let mut m = 0;
    while q.len() > 1 {
        // synthetic division by (x − r)
        let n = q.len() - 1;
        let mut out = alloc::vec![f.zero(); n];
        let mut carry = f.zero();
        for k in (0..=n).rev() {
            let v = f.add(q[k], f.mul(carry, r));
            if k == 0 {
                if v != f.zero() {
                    return m;
                }
            } else {
                out[k - 1] = v;
                carry = v;
            }
        }
        q = out;
        m += 1;
    }
    m
}
