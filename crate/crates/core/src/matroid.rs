//! Finite matroids given by an explicit circuit family, with brute-force
//! oracles for everything derived from it.
//!
//! Nothing here knows about graphs. Rank, bases and cocircuits are computed
//! by exhaustive search over subsets, which keeps them independent of the
//! graph characterizations they are used to check.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{EdgeSet, Error, Result, MAX_LABELS};

/// A base together with one ground element: the root of a fundamental
/// circuit (`element ∉ base`) or fundamental cocircuit (`element ∈ base`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseWitness {
    pub base: EdgeSet,
    pub element: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MatroidJson", into = "MatroidJson")]
pub struct Matroid {
    ground: Vec<String>,
    circuits: Vec<EdgeSet>,
    rank: OnceLock<usize>,
    bases: OnceLock<Vec<EdgeSet>>,
    cocircuits: OnceLock<Vec<EdgeSet>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.circuits == other.circuits
    }
}

impl Eq for Matroid {}

#[derive(Serialize, Deserialize)]
struct MatroidJson {
    ground: Vec<String>,
    circuits: Vec<Vec<String>>,
}

impl TryFrom<MatroidJson> for Matroid {
    type Error = Error;

    fn try_from(j: MatroidJson) -> Result<Self> {
        Matroid::new(j.ground, j.circuits)
    }
}

impl From<Matroid> for MatroidJson {
    fn from(m: Matroid) -> Self {
        let mut circuits: Vec<Vec<String>> = m.circuits.iter().map(|&c| m.labels(c)).collect();
        circuits.sort();
        MatroidJson {
            ground: m.ground,
            circuits,
        }
    }
}

impl Matroid {
    /// Builds a matroid from labels. The family is not validated; call
    /// [`Matroid::validate`] before relying on matroid axioms.
    pub fn new<G, S, C, T>(ground: G, circuits: C) -> Result<Self>
    where
        G: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator<Item = T>,
        T: IntoIterator,
        T::Item: AsRef<str>,
    {
        let mut ground: Vec<String> = ground.into_iter().map(Into::into).collect();
        ground.sort();
        if let Some(w) = ground.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        if ground.len() > MAX_LABELS {
            return Err(Error::TooLarge {
                what: "ground element",
                actual: ground.len(),
                limit: MAX_LABELS,
            });
        }
        let mut masks = Vec::new();
        for c in circuits {
            let mut m = EdgeSet::EMPTY;
            for l in c {
                let l = l.as_ref();
                let i = ground
                    .binary_search_by(|g| g.as_str().cmp(l))
                    .map_err(|_| Error::UnknownEdge(l.to_owned()))?;
                m = m.with(i);
            }
            masks.push(m);
        }
        Ok(Self::from_masks(ground, masks))
    }

    /// `ground` must be sorted and unique; circuits index into it.
    pub(crate) fn from_masks(ground: Vec<String>, mut circuits: Vec<EdgeSet>) -> Self {
        circuits.sort_unstable();
        circuits.dedup();
        Matroid {
            ground,
            circuits,
            rank: OnceLock::new(),
            bases: OnceLock::new(),
            cocircuits: OnceLock::new(),
        }
    }

    /// The matroid with no circuits.
    pub fn free<S: Into<String>>(ground: impl IntoIterator<Item = S>) -> Result<Self> {
        Matroid::new(ground, Vec::<Vec<String>>::new())
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn ground_set(&self) -> EdgeSet {
        EdgeSet::full(self.ground.len())
    }

    /// Circuits in ascending mask order.
    pub fn circuits(&self) -> &[EdgeSet] {
        &self.circuits
    }

    pub fn labels(&self, x: EdgeSet) -> Vec<String> {
        x.iter().map(|i| self.ground[i].clone()).collect()
    }

    pub fn element_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<EdgeSet> {
        labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                self.ground
                    .binary_search_by(|g| g.as_str().cmp(l))
                    .map_err(|_| Error::UnknownEdge(l.to_owned()))
            })
            .collect::<Result<Vec<_>>>()
            .map(EdgeSet::from_indices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matroid serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `None` when the circuit family satisfies the circuit axioms, otherwise
    /// a description of the first violation found.
    pub fn validation_failure(&self) -> Option<String> {
        let full = self.ground_set();
        for &c in &self.circuits {
            if c.is_empty() {
                return Some("the empty set is listed as a circuit".into());
            }
            if !c.is_subset(full) {
                return Some(format!("circuit {c:?} leaves the ground set"));
            }
        }
        for (i, &a) in self.circuits.iter().enumerate() {
            for &b in &self.circuits[i + 1..] {
                if a.is_subset(b) || b.is_subset(a) {
                    return Some(format!("circuits {a:?} and {b:?} are nested"));
                }
                let union = a | b;
                for e in a & b {
                    let rest = union.without(e);
                    if !self.circuits.iter().any(|c| c.is_subset(rest)) {
                        return Some(format!(
                            "elimination fails for {a:?}, {b:?} at element {e}"
                        ));
                    }
                }
            }
        }
        None
    }

    /// Antichain, no empty circuit, and weak circuit elimination, checked
    /// over every pair of circuits.
    pub fn validate(&self) -> bool {
        self.validation_failure().is_none()
    }

    pub fn is_independent(&self, x: EdgeSet) -> bool {
        !self.circuits.iter().any(|c| c.is_subset(x))
    }

    /// Size of a largest circuit-free subset of `x`, found by exhaustive
    /// search from the top size down.
    pub fn rank_of(&self, x: EdgeSet) -> usize {
        if self.is_independent(x) {
            return x.len();
        }
        let idx: Vec<usize> = x.iter().collect();
        for s in (0..x.len()).rev() {
            for pick in EdgeSet::combinations(idx.len(), s) {
                let y: EdgeSet = pick.iter().map(|j| idx[j]).collect();
                if self.is_independent(y) {
                    return s;
                }
            }
        }
        0
    }

    /// `ρ(M)`.
    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| self.rank_of(self.ground_set()))
    }

    /// `ρ*(M) = |E| - ρ(M)`.
    pub fn corank(&self) -> usize {
        self.size() - self.rank()
    }

    /// Every independent set of size `ρ(M)`, ascending mask order.
    pub fn bases(&self) -> &[EdgeSet] {
        self.bases.get_or_init(|| {
            EdgeSet::combinations(self.size(), self.rank())
                .filter(|&b| self.is_independent(b))
                .collect()
        })
    }

    pub fn is_base(&self, b: EdgeSet) -> bool {
        b.is_subset(self.ground_set()) && b.len() == self.rank() && self.is_independent(b)
    }

    /// Minimal sets meeting every base, in ascending mask order.
    pub fn cocircuits(&self) -> &[EdgeSet] {
        self.cocircuits.get_or_init(|| {
            let bases = self.bases();
            let n = self.size();
            let mut found: Vec<EdgeSet> = Vec::new();
            for s in 1..=n {
                let mut layer = Vec::new();
                for k in EdgeSet::combinations(n, s) {
                    if found.iter().any(|c| c.is_subset(k)) {
                        continue;
                    }
                    if bases.iter().all(|b| !b.is_disjoint(k)) {
                        layer.push(k);
                    }
                }
                found.extend(layer);
            }
            found.sort_unstable();
            found
        })
    }

    /// Fundamental circuit `C(e, B)` when `e ∉ B`, fundamental cocircuit
    /// `K(e, B)` when `e ∈ B`. Both are found by scanning the explicit
    /// families and must be unique.
    pub fn fundamental(&self, w: BaseWitness) -> Result<EdgeSet> {
        if !self.is_base(w.base) {
            return Err(Error::HypothesisUnmet(format!("{:?} is not a base", w.base)));
        }
        if w.element >= self.size() {
            return Err(Error::UnknownEdge(format!("#{}", w.element)));
        }
        let e = EdgeSet::singleton(w.element);
        let hits: Vec<EdgeSet> = if w.base.contains(w.element) {
            self.cocircuits()
                .iter()
                .copied()
                .filter(|&k| k & w.base == e)
                .collect()
        } else {
            let span = w.base | e;
            self.circuits
                .iter()
                .copied()
                .filter(|&c| c.contains(w.element) && c.is_subset(span))
                .collect()
        };
        match hits.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Internal(format!(
                "{} fundamental candidates for element {} and base {:?}",
                hits.len(),
                w.element,
                w.base
            ))),
        }
    }

    pub fn loops(&self) -> EdgeSet {
        self.circuits.iter().filter(|c| c.len() == 1).fold(EdgeSet::EMPTY, |a, &c| a | c)
    }

    /// Elements lying in every base.
    pub fn coloops(&self) -> EdgeSet {
        self.bases()
            .iter()
            .fold(self.ground_set(), |acc, &b| acc & b)
    }

    /// No loops, no coloops, and every two elements share a circuit. The
    /// matroid on the empty ground set is reported as not connected.
    pub fn is_connected(&self) -> bool {
        let full = self.ground_set();
        if full.is_empty() || !self.loops().is_empty() || !self.coloops().is_empty() {
            return false;
        }
        full.iter().all(|e| {
            let reach = self
                .circuits
                .iter()
                .filter(|c| c.contains(e))
                .fold(EdgeSet::EMPTY, |a, &c| a | c);
            reach == full
        })
    }

    /// `M \ K`: ground shrinks to `E - K`, circuits are those avoiding `K`.
    pub fn delete(&self, k: EdgeSet) -> Matroid {
        let keep = self.ground_set() - k;
        let mut remap = [usize::MAX; 64];
        let mut ground = Vec::with_capacity(keep.len());
        for i in keep {
            remap[i] = ground.len();
            ground.push(self.ground[i].clone());
        }
        let circuits = self
            .circuits
            .iter()
            .filter(|c| c.is_disjoint(k))
            .map(|c| c.iter().map(|i| remap[i]).collect())
            .collect();
        Matroid::from_masks(ground, circuits)
    }

    /// Label-exact equality: same ground set, same circuit family.
    pub fn equals(&self, other: &Matroid) -> bool {
        self == other
    }
}
