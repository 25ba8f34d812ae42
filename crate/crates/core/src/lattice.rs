//! Finite lattices with eagerly computed order, meet and join tables.
//!
//! A [`FiniteLattice`] is immutable once validated. Elements are plain
//! indices ([`Elem`]) into the label list; the canonical element order is
//! the input order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = usize;

#[derive(Clone)]
pub struct FiniteLattice {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, Elem>,
    covers: Vec<(Elem, Elem)>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    height: Vec<usize>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers
            .iter()
            .map(|&(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("FiniteLattice")
            .field("name", &self.name)
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

/// Two lattices are equal when they have the same labels in the same order
/// and the same cover relation. Names are ignored.
impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.covers == other.covers
    }
}

impl Eq for FiniteLattice {}

fn index_labels(labels: &[String]) -> Result<HashMap<String, Elem>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl FiniteLattice {
    /// Validates a lattice given by its elements and cover pairs `(lower, upper)`.
    ///
    /// Pairs that are not actual covers (transitive edges) are accepted; the
    /// stored cover relation is the Hasse reduction of the generated order.
    pub fn from_covers<S: AsRef<str>>(
        name: impl Into<String>,
        labels: Vec<String>,
        covers: &[(S, S)],
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyLattice);
        }
        let index = index_labels(&labels)?;
        let n = labels.len();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownLabel(s.to_string()));
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (a, b) in covers {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm; leftovers sit on a cycle.
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<Elem> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(labels[stuck].clone()));
        }
        let mut leq = vec![false; n * n];
        for &x in order.iter().rev() {
            leq[x * n + x] = true;
            for &y in &succ[x] {
                for z in 0..n {
                    if leq[y * n + z] {
                        leq[x * n + z] = true;
                    }
                }
            }
        }
        Self::from_order_with_index(name.into(), labels, index, leq)
    }

    /// Builds a lattice from a reflexive, antisymmetric, transitive relation
    /// given as a row-major `n * n` table.
    pub fn from_order(name: impl Into<String>, labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyLattice);
        }
        let index = index_labels(&labels)?;
        let n = labels.len();
        if leq.len() != n * n {
            return Err(Error::ArityMismatch(format!("order table has {} entries for {n} elements", leq.len())));
        }
        for a in 0..n {
            if !leq[a * n + a] {
                return Err(Error::Parse(format!("order is not reflexive at `{}`", labels[a])));
            }
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::CycleDetected(labels[a].clone()));
                }
                for c in 0..n {
                    if leq[a * n + b] && leq[b * n + c] && !leq[a * n + c] {
                        return Err(Error::Parse("order is not transitive".into()));
                    }
                }
            }
        }
        Self::from_order_with_index(name.into(), labels, index, leq)
    }

    fn from_order_with_index(
        name: String,
        labels: Vec<String>,
        index: HashMap<String, Elem>,
        leq: Vec<bool>,
    ) -> Result<Self> {
        let n = labels.len();
        let down: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| leq[y * n + x]).count()).collect();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let m = extremal_bound(n, &leq, &down, a, b, true)
                    .ok_or_else(|| Error::NotALattice { a: labels[a].clone(), b: labels[b].clone(), op: "meet" })?;
                let j = extremal_bound(n, &leq, &down, a, b, false)
                    .ok_or_else(|| Error::NotALattice { a: labels[a].clone(), b: labels[b].clone(), op: "join" })?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        Ok(Self::assemble(name, labels, index, leq, meet, join))
    }

    /// Builds a lattice from trusted meet and join tables.
    pub(crate) fn from_tables(name: String, labels: Vec<String>, meet: Vec<Elem>, join: Vec<Elem>) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = meet[a * n + b] == a;
            }
        }
        Ok(Self::assemble(name, labels, index, leq, meet, join))
    }

    fn assemble(
        name: String,
        labels: Vec<String>,
        index: HashMap<String, Elem>,
        leq: Vec<bool>,
        meet: Vec<Elem>,
        join: Vec<Elem>,
    ) -> Self {
        let n = labels.len();
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        let covers = hasse_covers(n, &leq);
        let height = heights(n, &leq, &covers);
        FiniteLattice { name, labels, index, covers, leq, meet, join, bottom, top, height }
    }

    pub(crate) fn assemble_with_covers(
        name: String,
        labels: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<Elem>,
        join: Vec<Elem>,
        mut covers: Vec<(Elem, Elem)>,
    ) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        covers.sort_unstable();
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        let height = heights(n, &leq, &covers);
        Ok(FiniteLattice { name, labels, index, covers, leq, meet, join, bottom, top, height })
    }

    /// The chain `labels[0] < labels[1] < ...`.
    pub fn chain_from_labels(name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        let covers: Vec<(String, String)> = labels.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Self::from_covers(name, labels, &covers)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn elem(&self, label: &str) -> Option<Elem> {
        self.index.get(label).copied()
    }

    pub fn elem_or_err(&self, label: &str) -> Result<Elem> {
        self.elem(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn is_cover(&self, a: Elem, b: Elem) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    pub fn upper_covers(&self, a: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.covers.iter().filter(move |c| c.0 == a).map(|c| c.1)
    }

    pub fn lower_covers(&self, a: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.covers.iter().filter(move |c| c.1 == a).map(|c| c.0)
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: Elem) -> usize {
        self.height[x]
    }

    /// Length of the lattice (height of the top).
    pub fn length(&self) -> usize {
        self.height[self.top]
    }

    pub fn atoms(&self) -> Vec<Elem> {
        self.upper_covers(self.bottom).collect()
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Exhaustive check of `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    pub fn distributivity_witness(&self) -> Option<(Elem, Elem, Elem)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !self.leq(a, c) || self.join(a, self.meet(b, c)) == self.meet(self.join(a, b), c)))
        })
    }

    /// Same universe, reversed order.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        let mut covers: Vec<(Elem, Elem)> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        covers.sort_unstable();
        let height = heights(n, &leq, &covers);
        FiniteLattice {
            name: dual_name(&self.name),
            labels: self.labels.clone(),
            index: self.index.clone(),
            covers,
            leq,
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
            height,
        }
    }

    /// The labelled lattice laws, checked on every triple.
    pub fn check_laws(&self) -> std::result::Result<(), String> {
        let n = self.len();
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(format!("idempotence fails at {}", self.labels[a]));
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return Err("commutativity fails".into());
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return Err("absorption fails".into());
                }
                for c in 0..n {
                    if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                        || self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                    {
                        return Err("associativity fails".into());
                    }
                }
            }
        }
        Ok(())
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => inner.to_string(),
        None => format!("dual({name})"),
    }
}

/// Greatest common lower bound (`lower = true`) or least common upper bound.
fn extremal_bound(n: usize, leq: &[bool], down: &[usize], a: Elem, b: Elem, lower: bool) -> Option<Elem> {
    let rel = |x: Elem, y: Elem| if lower { leq[x * n + y] } else { leq[y * n + x] };
    let bounds: Vec<Elem> = (0..n).filter(|&x| rel(x, a) && rel(x, b)).collect();
    let best = if lower {
        *bounds.iter().max_by_key(|&&x| down[x])?
    } else {
        *bounds.iter().min_by_key(|&&x| down[x])?
    };
    bounds.iter().all(|&x| rel(x, best)).then_some(best)
}

fn hasse_covers(n: usize, leq: &[bool]) -> Vec<(Elem, Elem)> {
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a * n + b] {
                continue;
            }
            let between = (0..n).any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
            if !between {
                covers.push((a, b));
            }
        }
    }
    covers
}

fn heights(n: usize, leq: &[bool], covers: &[(Elem, Elem)]) -> Vec<usize> {
    let mut order: Vec<Elem> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| leq[y * n + x]).count());
    let mut below = vec![Vec::new(); n];
    for &(a, b) in covers {
        below[b].push(a);
    }
    let mut h = vec![0usize; n];
    for &x in &order {
        h[x] = below[x].iter().map(|&a| h[a] + 1).max().unwrap_or(0);
    }
    h
}

/// A map between finite lattices known to preserve meets and joins.
#[derive(Clone)]
pub struct Homomorphism {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    map: Vec<Elem>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", self.source.label(x), self.target.label(y)))
            .collect();
        write!(f, "Homomorphism({} -> {}: {})", self.source.name(), self.target.name(), pairs.join(", "))
    }
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.source == *other.source && *self.target == *other.target
    }
}

impl Homomorphism {
    /// Checks that `map` preserves every meet and join.
    pub fn new(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::ArityMismatch(format!(
                "map has {} entries, source has {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::NotAHomomorphism(format!("image index {y} out of range")));
        }
        if let Some((a, b)) = hom_failure(&source, &target, &map) {
            return Err(Error::NotAHomomorphism(format!(
                "operations on `{}`, `{}` are not preserved",
                source.label(a),
                source.label(b)
            )));
        }
        Ok(Homomorphism { source, target, map })
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, map: Vec<Elem>) -> Self {
        debug_assert_eq!(map.len(), source.len());
        Homomorphism { source, target, map }
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        let map = l.elements().collect();
        Homomorphism { source: l.clone(), target: l, map }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn preserves_bounds(&self) -> bool {
        self.map[self.source.bottom()] == self.target.bottom() && self.map[self.source.top()] == self.target.top()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Homomorphism) -> Result<Homomorphism> {
        if *self.target != *g.source {
            return Err(Error::ArityMismatch("composition of non-composable maps".into()));
        }
        let map = self.map.iter().map(|&y| g.map[y]).collect();
        Ok(Homomorphism { source: self.source.clone(), target: g.target.clone(), map })
    }
}

/// First pair whose meet or join is not preserved.
pub(crate) fn hom_failure(source: &FiniteLattice, target: &FiniteLattice, map: &[Elem]) -> Option<(Elem, Elem)> {
    let n = source.len();
    for a in 0..n {
        for b in a..n {
            if map[source.meet(a, b)] != target.meet(map[a], map[b]) || map[source.join(a, b)] != target.join(map[a], map[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Mixed-radix encoding of tuples; the first coordinate is most significant.
pub(crate) fn encode_tuple(sizes: &[usize], coords: &[Elem]) -> Elem {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

pub(crate) fn decode_tuple(sizes: &[usize], mut x: Elem) -> Vec<Elem> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = x % s;
        x /= s;
    }
    out
}

pub(crate) fn product_labels(factors: &[&FiniteLattice], sizes: &[usize], total: usize) -> Vec<String> {
    if factors.len() == 1 {
        return factors[0].labels().to_vec();
    }
    let compact = factors.iter().all(|f| f.labels().iter().all(|l| l.chars().count() == 1));
    (0..total)
        .map(|x| {
            let parts: Vec<&str> = decode_tuple(sizes, x).iter().zip(factors).map(|(&c, f)| f.label(c)).collect();
            if compact {
                parts.concat()
            } else {
                format!("({})", parts.join(","))
            }
        })
        .collect()
}

/// Direct product with componentwise operations, plus the projections.
///
/// Element `x` of the product encodes the tuple of factor elements in mixed
/// radix with the first factor most significant.
pub fn product(factors: &[Arc<FiniteLattice>], cap: usize) -> Result<(Arc<FiniteLattice>, Vec<Homomorphism>)> {
    if factors.is_empty() {
        return Err(Error::ArityMismatch("product of zero factors".into()));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::SizeCapExceeded { size: total, cap });
    }
    let refs: Vec<&FiniteLattice> = factors.iter().map(|f| f.as_ref()).collect();
    let labels = product_labels(&refs, &sizes, total);
    let tuples: Vec<Vec<Elem>> = (0..total).map(|x| decode_tuple(&sizes, x)).collect();
    let mut meet = vec![0; total * total];
    let mut join = vec![0; total * total];
    let mut leq = vec![false; total * total];
    let mut buf_m = vec![0; sizes.len()];
    let mut buf_j = vec![0; sizes.len()];
    for a in 0..total {
        for b in 0..total {
            let mut le = true;
            for (t, f) in factors.iter().enumerate() {
                let (x, y) = (tuples[a][t], tuples[b][t]);
                buf_m[t] = f.meet(x, y);
                buf_j[t] = f.join(x, y);
                le &= f.leq(x, y);
            }
            meet[a * total + b] = encode_tuple(&sizes, &buf_m);
            join[a * total + b] = encode_tuple(&sizes, &buf_j);
            leq[a * total + b] = le;
        }
    }
    let mut covers = Vec::new();
    for a in 0..total {
        for (t, f) in factors.iter().enumerate() {
            for up in f.upper_covers(tuples[a][t]) {
                let mut c = tuples[a].clone();
                c[t] = up;
                covers.push((a, encode_tuple(&sizes, &c)));
            }
        }
    }
    let name = factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("×");
    let prod = Arc::new(FiniteLattice::assemble_with_covers(name, labels, leq, meet, join, covers)?);
    let projections = factors
        .iter()
        .enumerate()
        .map(|(t, f)| {
            let map = tuples.iter().map(|tup| tup[t]).collect();
            Homomorphism::new_unchecked(prod.clone(), f.clone(), map)
        })
        .collect();
    Ok((prod, projections))
}
