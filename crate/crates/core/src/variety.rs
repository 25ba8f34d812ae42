//! Variety containment for finite lattices through subdirectly irreducible
//! quotients and membership in `HS(L)`.
//!
//! Lattices generate congruence-distributive varieties, so for finite `K`
//! and `L` every subdirectly irreducible member of `Var L` lies in `HS(L)`.
//! Since `K` is a subdirect product of its SI quotients, `Var K ⊆ Var L`
//! holds exactly when each SI quotient of `K` lies in `HS(L)`.

use std::sync::Arc;

use crate::budget::{par_find_first, Budget};
use crate::congruence::{con_lattice, quotient, Congruence};
use crate::error::{Error, Result};
use crate::iso::find_isomorphism;
use crate::lattice::{Elem, FiniteLattice, Homomorphism};
use crate::sublattice::{enumerate_subuniverse_sets, Sublattice};

/// A subdirectly irreducible quotient `K/θ`.
#[derive(Clone, Debug)]
pub struct SIQuotient {
    pub parent: Arc<FiniteLattice>,
    pub theta: Congruence,
    pub quotient: Arc<FiniteLattice>,
    pub projection: Homomorphism,
    /// Least nonzero congruence of the quotient.
    pub monolith: Congruence,
    /// Every congruence of the parent whose quotient is isomorphic to this one.
    pub all_thetas: Vec<Congruence>,
}

/// Proof that `M ∈ HS(L)`: a sublattice `S` of `L`, a congruence of `S`,
/// and an isomorphism `S/θ → M`.
#[derive(Clone, Debug)]
pub struct HSWitness {
    /// Host indices of `S` in `L`, increasing.
    pub sublattice: Vec<Elem>,
    pub sub: Arc<FiniteLattice>,
    pub theta: Congruence,
    pub quotient: Arc<FiniteLattice>,
    /// `iso[i]` is the element of `M` matching block `i` of `θ`.
    pub iso: Vec<Elem>,
}

impl HSWitness {
    /// Rebuilds `S`, `θ` and `S/θ` from scratch and checks the isomorphism onto `m`.
    pub fn replay(&self, m: &FiniteLattice, l: &Arc<FiniteLattice>) -> Result<()> {
        let s = Sublattice::new(l, &self.sublattice)?;
        let theta = Congruence::from_classes(&s.lattice, self.theta.classes())?;
        let (q, _) = quotient(&theta)?;
        let iso = Homomorphism::new(q, Arc::new(m.clone()), self.iso.clone())?;
        if !iso.is_isomorphism() {
            return Err(Error::VerificationFailed {
                section: "hs-witness".into(),
                detail: "quotient map is not a bijection".into(),
            });
        }
        Ok(())
    }
}

fn check_hs_size(l: &FiniteLattice, budget: &Budget) -> Result<()> {
    if l.len() > budget.max_hs_size {
        return Err(Error::BudgetExceeded(format!(
            "`{}` has {} elements, HS enumeration is limited to {}",
            l.name(),
            l.len(),
            budget.max_hs_size
        )));
    }
    Ok(())
}

/// SI quotients of `k`, one per isomorphism class, in canonical congruence order.
pub fn si_quotients(k: &Arc<FiniteLattice>, budget: &Budget) -> Result<Vec<SIQuotient>> {
    let con = con_lattice(k, budget)?;
    let cl = con.lattice();
    let mut out: Vec<SIQuotient> = Vec::new();
    for i in 0..con.len() {
        // K/θ is SI iff θ ≠ 1 has a unique upper cover in Con K.
        if i == con.one() || cl.upper_covers(i).count() != 1 {
            continue;
        }
        let theta = con.member(i).clone();
        let (q, projection) = quotient(&theta)?;
        if let Some(prev) = out.iter_mut().find(|p| find_isomorphism(&p.quotient, &q).is_some()) {
            prev.all_thetas.push(theta);
            continue;
        }
        let qcon = con_lattice(&q, budget)?;
        let monolith = qcon
            .monolith()
            .map(|m| qcon.member(m).clone())
            .ok_or_else(|| Error::NotSubdirectlyIrreducible(q.name().to_string()))?;
        out.push(SIQuotient { parent: k.clone(), theta: theta.clone(), quotient: q, projection, monolith, all_thetas: vec![theta] });
    }
    Ok(out)
}

/// Whether `x ↦ (x/θ)_θ` over every SI congruence in `quotients` is injective,
/// i.e. the parent embeds subdirectly into the product of the quotients.
pub fn is_subdirect_decomposition(k: &FiniteLattice, quotients: &[SIQuotient]) -> bool {
    let thetas: Vec<&Congruence> = quotients.iter().flat_map(|q| q.all_thetas.iter()).collect();
    let signature = |x: Elem| thetas.iter().map(|t| t.class_of(x)).collect::<Vec<_>>();
    let sigs: Vec<Vec<usize>> = k.elements().map(signature).collect();
    if k.len() <= 1 {
        return true;
    }
    (0..sigs.len()).all(|a| (a + 1..sigs.len()).all(|b| sigs[a] != sigs[b]))
}

/// Whether `l` is subdirectly irreducible.
pub fn is_subdirectly_irreducible(l: &Arc<FiniteLattice>, budget: &Budget) -> Result<bool> {
    Ok(con_lattice(l, budget)?.monolith().is_some())
}

/// Order in which subuniverses are tried: those holding both bounds first,
/// then by size, then lexicographically.
fn hs_candidates(l: &FiniteLattice, min_size: usize, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
    let mut sets = enumerate_subuniverse_sets(l, budget.max_subuniverses, budget)?;
    sets.retain(|s| s.len() >= min_size);
    let bounded = |s: &Vec<Elem>| s.contains(&l.bottom()) && s.contains(&l.top());
    sets.sort_by_key(|s| (!bounded(s), s.len(), s.clone()));
    Ok(sets)
}

/// A witness for `M ∈ HS(L)`, or `None`.
pub fn hs_member(m: &FiniteLattice, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<Option<HSWitness>> {
    check_hs_size(l, budget)?;
    let candidates = hs_candidates(l, m.len(), budget)?;
    let search = |set: &Vec<Elem>| -> Option<Result<HSWitness>> {
        let s = match Sublattice::new(l, set) {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        let con = match con_lattice(&s.lattice, budget) {
            Ok(c) => c,
            Err(e) => return Some(Err(e)),
        };
        for theta in con.members().iter().filter(|t| t.num_blocks() == m.len()) {
            let (q, _) = match quotient(theta) {
                Ok(q) => q,
                Err(e) => return Some(Err(e)),
            };
            if let Some(iso) = find_isomorphism(&q, m) {
                return Some(Ok(HSWitness {
                    sublattice: set.clone(),
                    sub: s.lattice.clone(),
                    theta: theta.clone(),
                    quotient: q,
                    iso,
                }));
            }
        }
        None
    };
    par_find_first(budget.threads, &candidates, search).transpose()
}

/// Outcome of `Var K ⊆ Var L`.
#[derive(Clone, Debug)]
pub struct VarLeq {
    pub holds: bool,
    /// For each SI quotient of `K` checked so far, its witness in `HS(L)`.
    pub witnesses: Vec<(SIQuotient, HSWitness)>,
    /// The first SI quotient of `K` outside `HS(L)`.
    pub failing: Option<SIQuotient>,
}

/// Decides `Var K ⊆ Var L`.
pub fn var_leq(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<VarLeq> {
    check_hs_size(k, budget)?;
    check_hs_size(l, budget)?;
    let mut witnesses = Vec::new();
    for q in si_quotients(k, budget)? {
        match hs_member(&q.quotient, l, budget)? {
            Some(w) => witnesses.push((q, w)),
            None => return Ok(VarLeq { holds: false, witnesses, failing: Some(q) }),
        }
    }
    Ok(VarLeq { holds: true, witnesses, failing: None })
}

/// An SI quotient of `k` lying in neither `HS(L)` nor `HS(dual L)`.
pub fn find_separating_si(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<Option<SIQuotient>> {
    check_hs_size(k, budget)?;
    check_hs_size(l, budget)?;
    let dual = Arc::new(l.dual());
    for q in si_quotients(k, budget)? {
        if hs_member(&q.quotient, l, budget)?.is_none() && hs_member(&q.quotient, &dual, budget)?.is_none() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiPairClass {
    Isomorphic,
    DuallyIsomorphic,
    DistinctConcClasses,
    Indeterminate(String),
}

/// Classifies a pair of finite SI lattices by their varieties.
///
/// When `Var K` equals `Var L` or `Var(dual L)`, the pair is reported as
/// isomorphic or dually isomorphic (plain isomorphism is tested first).
/// Otherwise the two lattices generate distinct `Conc` classes.
pub fn si_pair_classifier(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<SiPairClass> {
    for x in [k, l] {
        if !is_subdirectly_irreducible(x, budget)? {
            return Err(Error::NotSubdirectlyIrreducible(x.name().to_string()));
        }
    }
    let dual = Arc::new(l.dual());
    let equal = |a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>| -> Result<bool> {
        Ok(var_leq(a, b, budget)?.holds && var_leq(b, a, budget)?.holds)
    };
    let outcome = (|| -> Result<(bool, bool)> { Ok((equal(k, l)?, equal(k, &dual)?)) })();
    let (plain, dually) = match outcome {
        Ok(v) => v,
        Err(Error::BudgetExceeded(why)) => return Ok(SiPairClass::Indeterminate(why)),
        Err(e) => return Err(e),
    };
    if !plain && !dually {
        return Ok(SiPairClass::DistinctConcClasses);
    }
    if find_isomorphism(k, l).is_some() {
        Ok(SiPairClass::Isomorphic)
    } else if find_isomorphism(k, &dual).is_some() {
        Ok(SiPairClass::DuallyIsomorphic)
    } else {
        Ok(SiPairClass::Indeterminate("equal varieties without an isomorphism".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    #[test]
    fn si_quotient_examples() {
        let b = Budget::default();
        let m3 = arc(builtin::m(3));
        let q = si_quotients(&m3, &b).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q[0].theta.is_zero());
        let sq = arc(builtin::boolean(2));
        let q = si_quotients(&sq, &b).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].quotient.len(), 2);
        assert_eq!(q[0].all_thetas.len(), 2);
        assert!(is_subdirect_decomposition(&sq, &q));
        assert!(si_quotients(&arc(builtin::chain(0)), &b).unwrap().is_empty());
    }

    #[test]
    fn hs_member_examples() {
        let b = Budget::default();
        let two = builtin::two();
        let m3 = arc(builtin::m(3));
        let w = hs_member(&two, &m3, &b).unwrap().unwrap();
        assert_eq!(w.sublattice, vec![m3.bottom(), m3.top()]);
        assert!(w.theta.is_zero());
        w.replay(&two, &m3).unwrap();
        let m4 = arc(builtin::m(4));
        let w = hs_member(&m3, &m4, &b).unwrap().unwrap();
        assert_eq!(w.sublattice.len(), 5);
        assert!(w.theta.is_zero());
        w.replay(&m3, &m4).unwrap();
        assert!(hs_member(&m3, &arc(builtin::n5()), &b).unwrap().is_none());
    }

    #[test]
    fn var_leq_examples() {
        let b = Budget::default();
        let (c2, c3) = (arc(builtin::chain(2)), arc(builtin::chain(3)));
        assert!(var_leq(&c3, &c2, &b).unwrap().holds);
        let (m3, m4) = (arc(builtin::m(3)), arc(builtin::m(4)));
        let r = var_leq(&m4, &m3, &b).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing.unwrap().quotient.len(), 6);
        assert!(var_leq(&m3, &m4, &b).unwrap().holds);
        let n5 = arc(builtin::n5());
        assert!(var_leq(&n5, &n5, &b).unwrap().holds);
        assert!(!var_leq(&n5, &m3, &b).unwrap().holds);
        assert!(!var_leq(&m3, &n5, &b).unwrap().holds);
        assert!(var_leq(&arc(builtin::two()), &m3, &b).unwrap().holds);
    }

    #[test]
    fn separation_examples() {
        let b = Budget::default();
        let (m3, n5) = (arc(builtin::m(3)), arc(builtin::n5()));
        assert_eq!(find_separating_si(&m3, &n5, &b).unwrap().unwrap().quotient.len(), 5);
        let (c2, c3) = (arc(builtin::chain(2)), arc(builtin::chain(3)));
        assert!(find_separating_si(&c3, &c2, &b).unwrap().is_none());
        assert!(find_separating_si(&n5, &n5, &b).unwrap().is_none());
    }

    #[test]
    fn classifier_examples() {
        let b = Budget::default();
        let (m3, n5) = (arc(builtin::m(3)), arc(builtin::n5()));
        assert_eq!(si_pair_classifier(&m3, &m3, &b).unwrap(), SiPairClass::Isomorphic);
        assert_eq!(si_pair_classifier(&n5, &arc(n5.dual()), &b).unwrap(), SiPairClass::Isomorphic);
        assert_eq!(si_pair_classifier(&m3, &n5, &b).unwrap(), SiPairClass::DistinctConcClasses);
        assert!(matches!(
            si_pair_classifier(&arc(builtin::boolean(2)), &m3, &b),
            Err(Error::NotSubdirectlyIrreducible(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let b = Budget::default();
        let big = arc(builtin::boolean(4));
        assert!(matches!(hs_member(&builtin::two(), &big, &b), Err(Error::BudgetExceeded(_))));
    }
}
