//! Commutative semirings and their scalars.
//!
//! The shipped catalog:
//!
//! | kind id          | carrier                                   | notes                         |
//! |------------------|-------------------------------------------|-------------------------------|
//! | `bool`           | {0, 1} with 1 + 1 = 1                     | finite, entire antiring       |
//! | `nat`            | natural numbers                           | additively cancellative       |
//! | `maxplus`        | ℚ ∪ {−∞}, a + b = max, a·b = a + b        | semifield                     |
//! | `supertropical`  | max-plus with a ghost layer for ties      | ties become ghosts            |
//! | `finite:truncK`  | {0..K} with saturating + and ×            | finite entire antiring        |
//! | `product`        | R₁ × R₂ componentwise                     | decomposable, not entire      |
//!
//! Every scalar carries its semiring kind in its representation; the
//! arithmetic entry points check membership, so a scalar can never leak
//! into a foreign semiring silently.
//!
//! Polynomial semirings and other symbolic carriers are out of scope; the
//! catalog is closed under binary products only.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A value of the supertropical extension of the max-plus semifield.
///
/// Addition takes the larger value; a tie between equal values produces a
/// ghost. Multiplication adds values and ghosts absorb: the product of a
/// ghost with anything nonzero is a ghost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuperScalar {
    Zero,
    Tangible(Rational64),
    Ghost(Rational64),
}

impl SuperScalar {
    pub fn value(&self) -> Option<Rational64> {
        match self {
            SuperScalar::Zero => None,
            SuperScalar::Tangible(v) | SuperScalar::Ghost(v) => Some(*v),
        }
    }

    pub fn is_ghost(&self) -> bool {
        matches!(self, SuperScalar::Ghost(_))
    }
}

/// An element of one of the shipped semirings.
///
/// The representation is semiring-specific; `Semiring::contains` decides
/// membership (a `Trunc` value must also respect the cap, a `Pair` must
/// match the product's factors).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Bool(bool),
    Nat(u64),
    /// `None` encodes −∞, the max-plus zero.
    MaxPlus(Option<Rational64>),
    Super(SuperScalar),
    Trunc(u32),
    Pair(Box<(Scalar, Scalar)>),
}

impl Scalar {
    pub fn pair(a: Scalar, b: Scalar) -> Scalar {
        Scalar::Pair(Box::new((a, b)))
    }

    /// Max-plus scalar with integer value.
    pub fn mp(v: i64) -> Scalar {
        Scalar::MaxPlus(Some(Rational64::from_integer(v)))
    }

    pub fn mp_rat(n: i64, d: i64) -> Scalar {
        Scalar::MaxPlus(Some(Rational64::new(n, d)))
    }

    pub const MP_NEG_INF: Scalar = Scalar::MaxPlus(None);

    pub fn tangible(v: i64) -> Scalar {
        Scalar::Super(SuperScalar::Tangible(Rational64::from_integer(v)))
    }

    pub fn ghost(v: i64) -> Scalar {
        Scalar::Super(SuperScalar::Ghost(Rational64::from_integer(v)))
    }
}

fn fmt_rational(r: &Rational64) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{}", u8::from(*b)),
            Scalar::Nat(n) => write!(f, "{n}"),
            Scalar::MaxPlus(None) => write!(f, "-inf"),
            Scalar::MaxPlus(Some(r)) => write!(f, "{}", fmt_rational(r)),
            Scalar::Super(SuperScalar::Zero) => write!(f, "-inf"),
            Scalar::Super(SuperScalar::Tangible(r)) => write!(f, "{}", fmt_rational(r)),
            Scalar::Super(SuperScalar::Ghost(r)) => write!(f, "{}g", fmt_rational(r)),
            Scalar::Trunc(v) => write!(f, "{v}"),
            Scalar::Pair(p) => write!(f, "({},{})", p.0, p.1),
        }
    }
}

/// A commutative semiring with 0 and 1, together with the oracles the rest
/// of the library consumes: the quasilinearity rule, unit inversion,
/// structural flags, and sampling grids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semiring {
    Bool,
    Nat,
    MaxPlus,
    Supertropical,
    /// Truncated naturals {0..cap}: a + b = min(a+b, cap), a·b = min(ab, cap).
    Trunc(u32),
    Product(Box<(Semiring, Semiring)>),
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind_id())
    }
}

impl Semiring {
    pub fn product(a: Semiring, b: Semiring) -> Semiring {
        Semiring::Product(Box::new((a, b)))
    }

    /// Kind tag as spelled in form files.
    pub fn kind_id(&self) -> String {
        match self {
            Semiring::Bool => "bool".into(),
            Semiring::Nat => "nat".into(),
            Semiring::MaxPlus => "maxplus".into(),
            Semiring::Supertropical => "supertropical".into(),
            Semiring::Trunc(cap) => format!("finite:trunc{cap}"),
            Semiring::Product(p) => format!("product({},{})", p.0.kind_id(), p.1.kind_id()),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Semiring::Bool => Scalar::Bool(false),
            Semiring::Nat => Scalar::Nat(0),
            Semiring::MaxPlus => Scalar::MaxPlus(None),
            Semiring::Supertropical => Scalar::Super(SuperScalar::Zero),
            Semiring::Trunc(_) => Scalar::Trunc(0),
            Semiring::Product(p) => Scalar::pair(p.0.zero(), p.1.zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Semiring::Bool => Scalar::Bool(true),
            Semiring::Nat => Scalar::Nat(1),
            Semiring::MaxPlus => Scalar::MaxPlus(Some(Rational64::zero())),
            Semiring::Supertropical => Scalar::Super(SuperScalar::Tangible(Rational64::zero())),
            Semiring::Trunc(_) => Scalar::Trunc(1),
            Semiring::Product(p) => Scalar::pair(p.0.one(), p.1.one()),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Semiring::Bool, Scalar::Bool(_)) => true,
            (Semiring::Nat, Scalar::Nat(_)) => true,
            (Semiring::MaxPlus, Scalar::MaxPlus(_)) => true,
            (Semiring::Supertropical, Scalar::Super(_)) => true,
            (Semiring::Trunc(cap), Scalar::Trunc(v)) => v <= cap,
            (Semiring::Product(p), Scalar::Pair(q)) => p.0.contains(&q.0) && p.1.contains(&q.1),
            _ => false,
        }
    }

    /// Membership check that surfaces the failure as a typed error.
    pub fn check_member(&self, s: &Scalar) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::ForeignScalar {
                ring: self.kind_id(),
                scalar: s.to_string(),
            })
        }
    }

    fn member_panic(&self, s: &Scalar) -> ! {
        panic!("scalar {s} outside semiring {self}: mixed-semiring arithmetic")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Semiring::Bool, Scalar::Bool(x), Scalar::Bool(y)) => Scalar::Bool(*x || *y),
            (Semiring::Nat, Scalar::Nat(x), Scalar::Nat(y)) => {
                Scalar::Nat(x.checked_add(*y).expect("nat addition overflow"))
            }
            (Semiring::MaxPlus, Scalar::MaxPlus(x), Scalar::MaxPlus(y)) => {
                Scalar::MaxPlus(match (x, y) {
                    (None, v) | (v, None) => *v,
                    (Some(u), Some(v)) => Some((*u).max(*v)),
                })
            }
            (Semiring::Supertropical, Scalar::Super(x), Scalar::Super(y)) => {
                Scalar::Super(super_add(*x, *y))
            }
            (Semiring::Trunc(cap), Scalar::Trunc(x), Scalar::Trunc(y)) => {
                Scalar::Trunc((x + y).min(*cap))
            }
            (Semiring::Product(p), Scalar::Pair(x), Scalar::Pair(y)) => {
                Scalar::pair(p.0.add(&x.0, &y.0), p.1.add(&x.1, &y.1))
            }
            _ => self.member_panic(if self.contains(a) { b } else { a }),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Semiring::Bool, Scalar::Bool(x), Scalar::Bool(y)) => Scalar::Bool(*x && *y),
            (Semiring::Nat, Scalar::Nat(x), Scalar::Nat(y)) => {
                Scalar::Nat(x.checked_mul(*y).expect("nat multiplication overflow"))
            }
            (Semiring::MaxPlus, Scalar::MaxPlus(x), Scalar::MaxPlus(y)) => {
                Scalar::MaxPlus(match (x, y) {
                    (None, _) | (_, None) => None,
                    (Some(u), Some(v)) => Some(u + v),
                })
            }
            (Semiring::Supertropical, Scalar::Super(x), Scalar::Super(y)) => {
                Scalar::Super(super_mul(*x, *y))
            }
            (Semiring::Trunc(cap), Scalar::Trunc(x), Scalar::Trunc(y)) => {
                Scalar::Trunc(((u64::from(*x) * u64::from(*y)).min(u64::from(*cap))) as u32)
            }
            (Semiring::Product(p), Scalar::Pair(x), Scalar::Pair(y)) => {
                Scalar::pair(p.0.mul(&x.0, &y.0), p.1.mul(&x.1, &y.1))
            }
            _ => self.member_panic(if self.contains(a) { b } else { a }),
        }
    }

    /// a + a, the semiring meaning of "2a".
    pub fn double(&self, a: &Scalar) -> Scalar {
        self.add(a, a)
    }

    pub fn square(&self, a: &Scalar) -> Scalar {
        self.mul(a, a)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        *a == self.zero()
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Scalar>>(&self, terms: I) -> Scalar {
        terms
            .into_iter()
            .fold(self.zero(), |acc, t| self.add(&acc, t))
    }

    // ---- structural flags -------------------------------------------------

    /// a + b = 0 forces a = b = 0. Every shipped semiring is an antiring.
    pub fn is_antiring(&self) -> bool {
        match self {
            Semiring::Product(p) => p.0.is_antiring() && p.1.is_antiring(),
            _ => true,
        }
    }

    /// No zero divisors. Products have (1,0)·(0,1) = 0.
    pub fn is_entire(&self) -> bool {
        !matches!(self, Semiring::Product(_))
    }

    /// No complementary nonzero idempotents μ₁ + μ₂ = 1 with μ₁μ₂ = 0.
    pub fn is_indecomposable(&self) -> bool {
        !matches!(self, Semiring::Product(_))
    }

    /// Does (a+b)² = a² + b² hold?
    pub fn is_frobenius(&self) -> bool {
        match self {
            Semiring::Bool | Semiring::MaxPlus | Semiring::Supertropical => true,
            Semiring::Nat => false,
            Semiring::Trunc(_) => self.holds_on_carrier(|r, x, y| {
                r.square(&r.add(x, y)) == r.add(&r.square(x), &r.square(y))
            }),
            Semiring::Product(p) => p.0.is_frobenius() && p.1.is_frobenius(),
        }
    }

    /// a + a = 0 implies a = 0. Immediate for antirings.
    pub fn is_double_free(&self) -> bool {
        self.is_antiring()
    }

    /// The NQL property: for all nonzero a, c there is some μ with a + μc ≠ a.
    ///
    /// Catalog answers for the infinite semirings (max-plus and its
    /// supertropical extension have unbounded value group ℚ; naturals grow
    /// strictly); finite semirings are decided exhaustively; a product has
    /// NQL exactly when both factors do (a failure (a,c) in one factor lifts
    /// to ((a,0),(c,0)) and conversely a zero coordinate of c is stuck).
    pub fn has_nql(&self) -> bool {
        match self {
            Semiring::Bool => false,
            Semiring::Nat | Semiring::MaxPlus | Semiring::Supertropical => true,
            Semiring::Trunc(_) => {
                let carrier = self.carrier().expect("finite carrier");
                let zero = self.zero();
                carrier.iter().filter(|a| **a != zero).all(|a| {
                    carrier
                        .iter()
                        .filter(|c| **c != zero)
                        .all(|c| carrier.iter().any(|mu| self.add(a, &self.mul(mu, c)) != *a))
                })
            }
            Semiring::Product(p) => p.0.has_nql() && p.1.has_nql(),
        }
    }

    fn holds_on_carrier(&self, law: impl Fn(&Semiring, &Scalar, &Scalar) -> bool) -> bool {
        let carrier = self.carrier().expect("finite carrier");
        carrier
            .iter()
            .all(|x| carrier.iter().all(|y| law(self, x, y)))
    }

    // ---- units ------------------------------------------------------------

    /// Multiplicative inverse if `a` is a unit, `None` otherwise.
    pub fn try_invert(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Semiring::Bool, Scalar::Bool(true)) => Some(Scalar::Bool(true)),
            (Semiring::Bool, Scalar::Bool(false)) => None,
            (Semiring::Nat, Scalar::Nat(1)) => Some(Scalar::Nat(1)),
            (Semiring::Nat, Scalar::Nat(_)) => None,
            (Semiring::MaxPlus, Scalar::MaxPlus(Some(v))) => Some(Scalar::MaxPlus(Some(-v))),
            (Semiring::MaxPlus, Scalar::MaxPlus(None)) => None,
            (Semiring::Supertropical, Scalar::Super(SuperScalar::Tangible(v))) => {
                Some(Scalar::Super(SuperScalar::Tangible(-v)))
            }
            (Semiring::Supertropical, Scalar::Super(_)) => None,
            (Semiring::Trunc(_), Scalar::Trunc(_)) => {
                let one = self.one();
                self.carrier()
                    .expect("finite carrier")
                    .into_iter()
                    .find(|u| self.mul(a, u) == one)
            }
            (Semiring::Product(p), Scalar::Pair(q)) => {
                let u0 = p.0.try_invert(&q.0)?;
                let u1 = p.1.try_invert(&q.1)?;
                Some(Scalar::pair(u0, u1))
            }
            _ => self.member_panic(a),
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.try_invert(a).is_some()
    }

    /// Full unit set when finitely enumerable (`None` for max-plus and the
    /// supertropical semiring, whose unit groups are infinite).
    pub fn units(&self) -> Option<Vec<Scalar>> {
        match self {
            Semiring::Bool | Semiring::Nat => Some(vec![self.one()]),
            Semiring::MaxPlus | Semiring::Supertropical => None,
            Semiring::Trunc(_) => Some(
                self.carrier()
                    .expect("finite carrier")
                    .into_iter()
                    .filter(|u| self.is_unit(u))
                    .collect(),
            ),
            Semiring::Product(p) => {
                let (u0, u1) = (p.0.units()?, p.1.units()?);
                let mut out = Vec::new();
                for a in &u0 {
                    for b in &u1 {
                        out.push(Scalar::pair(a.clone(), b.clone()));
                    }
                }
                out.sort();
                Some(out)
            }
        }
    }

    // ---- finite carriers and sampling grids --------------------------------

    /// The full carrier, for finite semirings.
    pub fn carrier(&self) -> Option<Vec<Scalar>> {
        match self {
            Semiring::Bool => Some(vec![Scalar::Bool(false), Scalar::Bool(true)]),
            Semiring::Trunc(cap) => Some((0..=*cap).map(Scalar::Trunc).collect()),
            Semiring::Product(p) => {
                let (c0, c1) = (p.0.carrier()?, p.1.carrier()?);
                let mut out = Vec::new();
                for a in &c0 {
                    for b in &c1 {
                        out.push(Scalar::pair(a.clone(), b.clone()));
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Default sampling grid for checks on infinite semirings: {0..6} for ℕ,
    /// −3..3 plus −∞ for max-plus, both layers of −2..2 for supertropical.
    /// Finite semirings sample their whole carrier. Always contains 0 and 1.
    pub fn default_sample(&self) -> Vec<Scalar> {
        match self {
            Semiring::Bool | Semiring::Trunc(_) => self.carrier().unwrap(),
            Semiring::Nat => (0..=6).map(Scalar::Nat).collect(),
            Semiring::MaxPlus => {
                let mut g = vec![Scalar::MaxPlus(None)];
                g.extend((-3..=3).map(Scalar::mp));
                g
            }
            Semiring::Supertropical => {
                let mut g = vec![Scalar::Super(SuperScalar::Zero)];
                g.extend((-2..=2).map(Scalar::tangible));
                g.extend((-2..=2).map(Scalar::ghost));
                g
            }
            Semiring::Product(p) => {
                let (g0, g1) = (p.0.default_sample(), p.1.default_sample());
                let mut out = Vec::new();
                for a in &g0 {
                    for b in &g1 {
                        out.push(Scalar::pair(a.clone(), b.clone()));
                    }
                }
                out
            }
        }
    }

    // ---- quasilinearity oracle ---------------------------------------------

    /// Decides whether the rank-2 restriction with diagonal `a_eps`, `a_eta`
    /// and cross coefficient `beta` is quasilinear, i.e. whether
    /// `a_eps·x² + a_eta·y² + beta·x·y = a_eps·x² + a_eta·y²` for all x, y.
    ///
    /// Rules: `beta = 0` is always quasilinear; finite semirings decide
    /// exhaustively; ℕ is additively cancellative so only `beta = 0`
    /// qualifies; max-plus uses the dominance rule 2β ≤ α_ε + α_η in
    /// classical arithmetic (the worst case is the balanced point
    /// α_ε + 2x = α_η + 2y, attainable over ℚ); supertropical applies the
    /// same rule to the underlying values, since at a dominance tie both
    /// sides become the same ghost; products decide componentwise.
    pub fn pair_quasilinear(&self, a_eps: &Scalar, a_eta: &Scalar, beta: &Scalar) -> bool {
        if self.is_zero(beta) {
            return true;
        }
        match self {
            Semiring::Bool | Semiring::Trunc(_) => {
                let carrier = self.carrier().expect("finite carrier");
                carrier.iter().all(|x| {
                    carrier.iter().all(|y| {
                        let qx = self.mul(a_eps, &self.square(x));
                        let qy = self.mul(a_eta, &self.square(y));
                        let cross = self.mul(beta, &self.mul(x, y));
                        let rhs = self.add(&qx, &qy);
                        self.add(&rhs, &cross) == rhs
                    })
                })
            }
            Semiring::Nat => false,
            Semiring::MaxPlus => dominated(mp_value(beta), mp_value(a_eps), mp_value(a_eta)),
            Semiring::Supertropical => {
                dominated(super_value(beta), super_value(a_eps), super_value(a_eta))
            }
            Semiring::Product(p) => match (a_eps, a_eta, beta) {
                (Scalar::Pair(a), Scalar::Pair(b), Scalar::Pair(c)) => {
                    p.0.pair_quasilinear(&a.0, &b.0, &c.0) && p.1.pair_quasilinear(&a.1, &b.1, &c.1)
                }
                _ => self.member_panic(beta),
            },
        }
    }

    // ---- literals ----------------------------------------------------------

    /// Parse a scalar literal: `-inf` for the max-plus/supertropical zero,
    /// `p/q` rationals, `3g` ghosts, decimal naturals, `(a,b)` pairs.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let bad = || Error::Parse(format!("malformed {} scalar literal {t:?}", self.kind_id()));
        match self {
            Semiring::Bool => match t {
                "0" | "false" => Ok(Scalar::Bool(false)),
                "1" | "true" => Ok(Scalar::Bool(true)),
                _ => Err(bad()),
            },
            Semiring::Nat => t.parse::<u64>().map(Scalar::Nat).map_err(|_| bad()),
            Semiring::MaxPlus => {
                if t == "-inf" {
                    Ok(Scalar::MaxPlus(None))
                } else {
                    parse_rational(t)
                        .map(|r| Scalar::MaxPlus(Some(r)))
                        .ok_or_else(bad)
                }
            }
            Semiring::Supertropical => {
                if t == "-inf" {
                    Ok(Scalar::Super(SuperScalar::Zero))
                } else if let Some(head) = t.strip_suffix('g') {
                    parse_rational(head)
                        .map(|r| Scalar::Super(SuperScalar::Ghost(r)))
                        .ok_or_else(bad)
                } else {
                    parse_rational(t)
                        .map(|r| Scalar::Super(SuperScalar::Tangible(r)))
                        .ok_or_else(bad)
                }
            }
            Semiring::Trunc(cap) => {
                let v = t.parse::<u32>().map_err(|_| bad())?;
                if v <= *cap {
                    Ok(Scalar::Trunc(v))
                } else {
                    Err(Error::Parse(format!(
                        "scalar {v} exceeds cap {cap} of {}",
                        self.kind_id()
                    )))
                }
            }
            Semiring::Product(p) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (l, r) = split_pair(inner).ok_or_else(bad)?;
                Ok(Scalar::pair(p.0.parse_scalar(l)?, p.1.parse_scalar(r)?))
            }
        }
    }
}

/// Split `a,b` at the top-level comma, respecting nested parentheses.
fn split_pair(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_rational(t: &str) -> Option<Rational64> {
    if let Some((n, d)) = t.split_once('/') {
        let numer = n.trim().parse::<i64>().ok()?;
        let denom = d.trim().parse::<i64>().ok()?;
        if denom == 0 {
            return None;
        }
        Some(Rational64::new(numer, denom))
    } else {
        t.parse::<i64>().ok().map(Rational64::from_integer)
    }
}

fn mp_value(s: &Scalar) -> Option<Rational64> {
    match s {
        Scalar::MaxPlus(v) => *v,
        _ => panic!("expected max-plus scalar"),
    }
}

fn super_value(s: &Scalar) -> Option<Rational64> {
    match s {
        Scalar::Super(v) => v.value(),
        _ => panic!("expected supertropical scalar"),
    }
}

/// 2β ≤ α_ε + α_η in classical arithmetic, with −∞ as `None`.
fn dominated(beta: Option<Rational64>, a: Option<Rational64>, b: Option<Rational64>) -> bool {
    match beta {
        None => true,
        Some(vb) => match (a, b) {
            (Some(va), Some(vc)) => vb + vb <= va + vc,
            _ => false,
        },
    }
}

fn super_add(a: SuperScalar, b: SuperScalar) -> SuperScalar {
    match (a.value(), b.value()) {
        (None, _) => b,
        (_, None) => a,
        (Some(u), Some(v)) => {
            if u > v {
                a
            } else if v > u {
                b
            } else {
                SuperScalar::Ghost(u)
            }
        }
    }
}

fn super_mul(a: SuperScalar, b: SuperScalar) -> SuperScalar {
    match (a, b) {
        (SuperScalar::Zero, _) | (_, SuperScalar::Zero) => SuperScalar::Zero,
        (SuperScalar::Tangible(u), SuperScalar::Tangible(v)) => SuperScalar::Tangible(u + v),
        _ => SuperScalar::Ghost(a.value().unwrap() + b.value().unwrap()),
    }
}

// ---------------------------------------------------------------------------
// Axiom checking
// ---------------------------------------------------------------------------

/// The laws `axioms_check` examines over a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    AddCommutative,
    AddAssociative,
    ZeroNeutral,
    MulCommutative,
    MulAssociative,
    OneNeutral,
    ZeroAbsorbs,
    Distributive,
    /// a + b = 0 ⟹ a = b = 0.
    Antiring,
    /// ab = 0 ⟹ a = 0 or b = 0.
    Entire,
    /// (a + b)² = a² + b².
    Frobenius,
    /// a + a = 0 ⟹ a = 0.
    DoubleFree,
    /// No complementary nonzero idempotents μ₁ + μ₂ = 1, μ₁μ₂ = 0.
    Indecomposable,
}

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Axiom::AddCommutative => "add_commutative",
            Axiom::AddAssociative => "add_associative",
            Axiom::ZeroNeutral => "zero_neutral",
            Axiom::MulCommutative => "mul_commutative",
            Axiom::MulAssociative => "mul_associative",
            Axiom::OneNeutral => "one_neutral",
            Axiom::ZeroAbsorbs => "zero_absorbs",
            Axiom::Distributive => "distributive",
            Axiom::Antiring => "antiring",
            Axiom::Entire => "entire",
            Axiom::Frobenius => "frobenius",
            Axiom::DoubleFree => "double_free",
            Axiom::Indecomposable => "indecomposable",
        }
    }
}

/// Verdict for one axiom: holds on the sample, or refuted with a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Vec<Scalar>>,
}

/// Result of `axioms_check`: per-axiom verdicts plus any declared flags the
/// sample refutes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagReport {
    pub sample_size: usize,
    pub checks: Vec<AxiomCheck>,
    /// Names of handle flags contradicted by a sampled refutation.
    pub inconsistent: Vec<String>,
}

impl FlagReport {
    pub fn verdict(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("axiom always checked")
    }
}

/// Check the semiring laws over every tuple drawn from `sample` (0 and 1 are
/// adjoined if missing). Refutations carry a concrete witness tuple and are
/// verdicts, not errors.
pub fn axioms_check(ring: &Semiring, sample: &[Scalar]) -> FlagReport {
    let mut s: Vec<Scalar> = Vec::new();
    for x in sample {
        if ring.contains(x) && !s.contains(x) {
            s.push(x.clone());
        }
    }
    for req in [ring.zero(), ring.one()] {
        if !s.contains(&req) {
            s.push(req);
        }
    }

    let zero = ring.zero();
    let one = ring.one();
    let mut checks = Vec::new();

    let mut check2 = |axiom: Axiom, law: &dyn Fn(&Scalar, &Scalar) -> bool| {
        let mut witness = None;
        'outer: for a in &s {
            for b in &s {
                if !law(a, b) {
                    witness = Some(vec![a.clone(), b.clone()]);
                    break 'outer;
                }
            }
        }
        checks.push(AxiomCheck {
            axiom,
            holds: witness.is_none(),
            witness,
        });
    };

    check2(Axiom::AddCommutative, &|a, b| {
        ring.add(a, b) == ring.add(b, a)
    });
    check2(Axiom::MulCommutative, &|a, b| {
        ring.mul(a, b) == ring.mul(b, a)
    });
    check2(Axiom::Antiring, &|a, b| {
        ring.add(a, b) != zero || (*a == zero && *b == zero)
    });
    check2(Axiom::Entire, &|a, b| {
        ring.mul(a, b) != zero || *a == zero || *b == zero
    });
    check2(Axiom::Frobenius, &|a, b| {
        ring.square(&ring.add(a, b)) == ring.add(&ring.square(a), &ring.square(b))
    });

    // Unary laws reuse the binary driver with the second argument ignored.
    check2(Axiom::ZeroNeutral, &|a, _| ring.add(a, &zero) == *a);
    check2(Axiom::OneNeutral, &|a, _| ring.mul(a, &one) == *a);
    check2(Axiom::ZeroAbsorbs, &|a, _| ring.mul(a, &zero) == zero);
    check2(Axiom::DoubleFree, &|a, _| {
        ring.add(a, a) != zero || *a == zero
    });

    let mut check3 = |axiom: Axiom, law: &dyn Fn(&Scalar, &Scalar, &Scalar) -> bool| {
        let mut witness = None;
        'outer: for a in &s {
            for b in &s {
                for c in &s {
                    if !law(a, b, c) {
                        witness = Some(vec![a.clone(), b.clone(), c.clone()]);
                        break 'outer;
                    }
                }
            }
        }
        checks.push(AxiomCheck {
            axiom,
            holds: witness.is_none(),
            witness,
        });
    };

    check3(Axiom::AddAssociative, &|a, b, c| {
        ring.add(&ring.add(a, b), c) == ring.add(a, &ring.add(b, c))
    });
    check3(Axiom::MulAssociative, &|a, b, c| {
        ring.mul(&ring.mul(a, b), c) == ring.mul(a, &ring.mul(b, c))
    });
    check3(Axiom::Distributive, &|a, b, c| {
        ring.mul(a, &ring.add(b, c)) == ring.add(&ring.mul(a, b), &ring.mul(a, c))
    });

    // Complementary idempotent pair within the sample.
    let mut indec_witness = None;
    'outer: for m1 in &s {
        for m2 in &s {
            if *m1 != zero && *m2 != zero && ring.mul(m1, m2) == zero && ring.add(m1, m2) == one {
                indec_witness = Some(vec![m1.clone(), m2.clone()]);
                break 'outer;
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: Axiom::Indecomposable,
        holds: indec_witness.is_none(),
        witness: indec_witness,
    });

    let mut inconsistent = Vec::new();
    let declared = [
        (Axiom::Antiring, ring.is_antiring(), "is_antiring"),
        (Axiom::Entire, ring.is_entire(), "is_entire"),
        (
            Axiom::Indecomposable,
            ring.is_indecomposable(),
            "is_indecomposable",
        ),
        (Axiom::Frobenius, ring.is_frobenius(), "frobenius"),
        (Axiom::DoubleFree, ring.is_double_free(), "double_free"),
    ];
    for (axiom, flag, name) in declared {
        let verdict = checks.iter().find(|c| c.axiom == axiom).unwrap();
        if flag && !verdict.holds {
            inconsistent.push(name.to_string());
        }
    }

    FlagReport {
        sample_size: s.len(),
        checks,
        inconsistent,
    }
}

/// Deterministic deduplicated sort of a scalar set; handy for unit candidate
/// lists and report output.
pub fn sorted_unique(scalars: &[Scalar]) -> Vec<Scalar> {
    let set: BTreeSet<Scalar> = scalars.iter().cloned().collect();
    set.into_iter().collect()
}
