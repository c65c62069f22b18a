//! Abstract topological rewriting systems and two systems that are
//! confluent (hence τ-confluent) without being infinitary confluent.
//!
//! The topological closure `a ⇝ b` ("finite reductions from `a` enter every
//! neighbourhood of `b`") is approximated at a resolution `ε`: a witness is a
//! finite path from exactly `a` to some `b'` with `d(b', b) < ε`. The source
//! is matched exactly and only the target is approximated. A bounded search
//! that finds nothing reports [`Reach::Unknown`], never unreachability.
//!
//! If `b ≠ c` are normal forms with `a ⇝ b` and `a ⇝ c` in a T1 space, the
//! system cannot be infinitary confluent. [`refute_infinitary_confluence`]
//! exhibits exactly this obstruction.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub trait AbstractSystem {
    type State: Clone + Eq + Hash + fmt::Debug + fmt::Display;

    fn name(&self) -> &str;

    /// Finite, deterministic list of one-step reducts.
    fn successors(&self, s: &Self::State) -> Result<Vec<Self::State>>;

    /// A metric inducing the topology.
    fn distance(&self, a: &Self::State, b: &Self::State) -> BigRational;

    fn is_normal_form(&self, s: &Self::State) -> Result<bool> {
        Ok(self.successors(s)?.is_empty())
    }
}

/// `2^{-k}`.
pub fn pow2_inv(k: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Parses a resolution written `2^-k` or as a positive rational.
pub fn parse_eps(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let value = if let Some(k) = t.strip_prefix("2^-") {
        let k: u64 = k
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad exponent in {t:?}")))?;
        pow2_inv(k)
    } else {
        t.parse::<BigRational>()
            .map_err(|_| Error::InvalidArgument(format!("bad resolution {t:?}")))?
    };
    if !value.is_positive() {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    Ok(value)
}

/// A dyadic rational `numerator / 2^log2_den` in `[0, 2]`, kept reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclicState {
    numerator: BigInt,
    log2_den: u64,
}

impl CyclicState {
    pub fn new(numerator: impl Into<BigInt>, log2_den: u64) -> Result<Self> {
        let mut numerator = numerator.into();
        let mut log2_den = log2_den;
        while log2_den > 0 && numerator.is_even() {
            numerator >>= 1;
            log2_den -= 1;
        }
        let s = CyclicState { numerator, log2_den };
        let v = s.value();
        if v.is_negative() || v > BigRational::from_integer(2.into()) {
            return Err(Error::DomainViolation(format!("{s} is outside [0, 2]")));
        }
        Ok(s)
    }

    pub fn zero() -> Self {
        CyclicState { numerator: BigInt::zero(), log2_den: 0 }
    }

    pub fn two() -> Self {
        CyclicState { numerator: 2.into(), log2_den: 0 }
    }

    /// `1/2^k`.
    pub fn left(k: u64) -> Self {
        CyclicState { numerator: BigInt::one(), log2_den: k }
    }

    /// `2 − 1/2^k`.
    pub fn right(k: u64) -> Self {
        CyclicState::new((BigInt::one() << (k + 1)) - 1, k).expect("in range")
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.log2_den)
    }

    fn is_left(&self) -> bool {
        self.numerator.is_one()
    }

    fn is_right(&self) -> bool {
        self.log2_den > 0 && self.numerator == (BigInt::one() << (self.log2_den + 1)) - 1
    }
}

impl fmt::Display for CyclicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_den == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigInt::one() << self.log2_den)
        }
    }
}

/// `1/2^{n+1} ⇄ 1/2^n` and `2 − 1/2^n ⇄ 2 − 1/2^{n+1}` on the reachable
/// dyadic points plus the limits `0` and `2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CyclicSystem;

impl AbstractSystem for CyclicSystem {
    type State = CyclicState;

    fn name(&self) -> &str {
        "cyclic"
    }

    fn successors(&self, s: &CyclicState) -> Result<Vec<CyclicState>> {
        let k = s.log2_den;
        if s.numerator.is_zero() || *s == CyclicState::two() {
            Ok(vec![])
        } else if k == 0 && s.is_left() {
            Ok(vec![CyclicState::left(1), CyclicState::right(1)])
        } else if s.is_left() {
            Ok(vec![CyclicState::left(k + 1), CyclicState::left(k - 1)])
        } else if s.is_right() {
            let back = if k == 1 { CyclicState::left(0) } else { CyclicState::right(k - 1) };
            Ok(vec![back, CyclicState::right(k + 1)])
        } else {
            Err(Error::DomainViolation(format!("{s} is not a state of the cyclic system")))
        }
    }

    fn distance(&self, a: &CyclicState, b: &CyclicState) -> BigRational {
        (a.value() - b.value()).abs()
    }
}

/// An element of `N ∪ {∞}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum NatInf {
    Fin(u64),
    Inf,
}

impl NatInf {
    /// `2^{-n}`, with `2^{-∞} = 0`.
    pub fn weight(self) -> BigRational {
        match self {
            NatInf::Fin(n) => pow2_inv(n),
            NatInf::Inf => BigRational::zero(),
        }
    }
}

impl fmt::Display for NatInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatInf::Fin(n) => write!(f, "{n}"),
            NatInf::Inf => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct NbarState(pub NatInf, pub NatInf);

impl NbarState {
    pub fn finite(a: u64, b: u64) -> Self {
        NbarState(NatInf::Fin(a), NatInf::Fin(b))
    }

    /// Componentwise maximum: the common reduct of two finite reducts.
    pub fn join(&self, other: &NbarState) -> NbarState {
        NbarState(self.0.max(other.0), self.1.max(other.1))
    }

    /// Whether `self →* other` with finitely many steps.
    pub fn reaches(&self, other: &NbarState) -> bool {
        match (self, other) {
            (NbarState(NatInf::Fin(a), NatInf::Fin(b)), NbarState(NatInf::Fin(c), NatInf::Fin(d))) => {
                a <= c && b <= d
            }
            _ => self == other,
        }
    }
}

impl fmt::Display for NbarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// `(n,m) → (n+1,m)` and `(n,m) → (n,m+1)` for finite `n, m`, with the
/// metric `|2^{-a} − 2^{-c}| + |2^{-b} − 2^{-d}|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NbarSystem;

impl AbstractSystem for NbarSystem {
    type State = NbarState;

    fn name(&self) -> &str {
        "nbar"
    }

    fn successors(&self, s: &NbarState) -> Result<Vec<NbarState>> {
        match *s {
            NbarState(NatInf::Fin(n), NatInf::Fin(m)) => {
                let (Some(n1), Some(m1)) = (n.checked_add(1), m.checked_add(1)) else {
                    return Err(Error::DomainViolation(format!("{s} overflows")));
                };
                Ok(vec![NbarState::finite(n1, m), NbarState::finite(n, m1)])
            }
            _ => Ok(vec![]),
        }
    }

    fn distance(&self, a: &NbarState, b: &NbarState) -> BigRational {
        (a.0.weight() - b.0.weight()).abs() + (a.1.weight() - b.1.weight()).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reach<S> {
    /// `path[0]` is the source; the last state is within `ε` of the target.
    Found(Vec<S>),
    /// Nothing within `max_steps`; says nothing about reachability.
    Unknown,
}

impl<S> Reach<S> {
    pub fn path(&self) -> Option<&[S]> {
        match self {
            Reach::Found(p) => Some(p),
            Reach::Unknown => None,
        }
    }
}

/// Breadth-first search for a shortest path from `a` into the open
/// `ε`-ball around `target`.
pub fn witness_topological_reach<A: AbstractSystem>(
    sys: &A,
    a: &A::State,
    target: &A::State,
    eps: &BigRational,
    max_steps: usize,
) -> Result<Reach<A::State>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let mut parent: HashMap<A::State, Option<A::State>> = HashMap::from([(a.clone(), None)]);
    let mut queue = VecDeque::from([(a.clone(), 0usize)]);
    while let Some((s, depth)) = queue.pop_front() {
        if sys.distance(&s, target) < *eps {
            let mut path = vec![s.clone()];
            let mut cur = s;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(p.clone());
                cur = p.clone();
            }
            path.reverse();
            return Ok(Reach::Found(path));
        }
        if depth == max_steps {
            continue;
        }
        for t in sys.successors(&s)? {
            if !parent.contains_key(&t) {
                parent.insert(t.clone(), Some(s.clone()));
                queue.push_back((t, depth + 1));
            }
        }
    }
    Ok(Reach::Unknown)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<S> {
    /// Two distinct normal forms both topologically reachable from `a`.
    Refuted { first: Vec<S>, second: Vec<S> },
    Inconclusive { reason: String },
}

impl<S> Verdict<S> {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

pub fn refute_infinitary_confluence<A: AbstractSystem>(
    sys: &A,
    a: &A::State,
    nf1: &A::State,
    nf2: &A::State,
    eps: &BigRational,
    max_steps: usize,
) -> Result<Verdict<A::State>> {
    if nf1 == nf2 {
        return Err(Error::EqualNormalForms);
    }
    for nf in [nf1, nf2] {
        if !sys.is_normal_form(nf)? {
            return Ok(Verdict::Inconclusive {
                reason: format!("{nf} is not a normal form"),
            });
        }
    }
    let first = witness_topological_reach(sys, a, nf1, eps, max_steps)?;
    let second = witness_topological_reach(sys, a, nf2, eps, max_steps)?;
    Ok(match (first, second) {
        (Reach::Found(first), Reach::Found(second)) => Verdict::Refuted { first, second },
        (Reach::Unknown, _) => Verdict::Inconclusive {
            reason: format!("no path from {a} towards {nf1} within {max_steps} steps"),
        },
        (_, Reach::Unknown) => Verdict::Inconclusive {
            reason: format!("no path from {a} towards {nf2} within {max_steps} steps"),
        },
    })
}

/// Serializable rendering of a verdict, states shown as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub system: String,
    pub eps: String,
    pub source: String,
    pub normal_forms: [String; 2],
    pub refuted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<[Vec<String>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn strings<S: fmt::Display>(path: &[S]) -> Vec<String> {
    path.iter().map(ToString::to_string).collect()
}

impl VerdictReport {
    pub fn new<A: AbstractSystem>(
        sys: &A,
        a: &A::State,
        nfs: [&A::State; 2],
        eps: &BigRational,
        verdict: &Verdict<A::State>,
    ) -> Self {
        let (paths, reason) = match verdict {
            Verdict::Refuted { first, second } => (Some([strings(first), strings(second)]), None),
            Verdict::Inconclusive { reason } => (None, Some(reason.clone())),
        };
        VerdictReport {
            system: sys.name().to_string(),
            eps: eps.to_string(),
            source: a.to_string(),
            normal_forms: [nfs[0].to_string(), nfs[1].to_string()],
            refuted: verdict.is_refuted(),
            paths,
            reason,
        }
    }
}

/// Runs the standard refutation for one of the built-in systems.
pub fn demo(system: &str, eps: &BigRational, max_steps: usize) -> Result<VerdictReport> {
    match system {
        "cyclic" => {
            let sys = CyclicSystem;
            let (a, b, c) = (CyclicState::left(0), CyclicState::zero(), CyclicState::two());
            let v = refute_infinitary_confluence(&sys, &a, &b, &c, eps, max_steps)?;
            Ok(VerdictReport::new(&sys, &a, [&b, &c], eps, &v))
        }
        "nbar" => {
            let sys = NbarSystem;
            let a = NbarState::finite(0, 0);
            let b = NbarState(NatInf::Inf, NatInf::Fin(0));
            let c = NbarState(NatInf::Fin(0), NatInf::Inf);
            let v = refute_infinitary_confluence(&sys, &a, &b, &c, eps, max_steps)?;
            Ok(VerdictReport::new(&sys, &a, [&b, &c], eps, &v))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown system {other:?}, expected cyclic or nbar"
        ))),
    }
}

impl Serialize for CyclicState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for NbarState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
