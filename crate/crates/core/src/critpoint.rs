//! The critical-point gate: `crit(Var K, Var L)` is either infinite or at
//! most `ℵ2` for finite `K` and `L`, and which one holds is decidable.

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::Result;
use crate::iso::find_isomorphism;
use crate::lattice::FiniteLattice;
use crate::variety::{find_separating_si, si_pair_classifier, var_leq, SIQuotient, SiPairClass, VarLeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `Conc(Var K) ⊆ Conc(Var L)`.
    Infinite,
    /// Some lattice of `Var K` of size at most `ℵ2` has no congruence-lattice
    /// counterpart in `Var L`.
    AtMostAleph2,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Infinite => "Infinite",
            Verdict::AtMostAleph2 => "AtMostAleph2",
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Infinite => 0,
            Verdict::AtMostAleph2 => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CritVerdict {
    pub verdict: Verdict,
    /// `Var K ⊆ Var L`.
    pub plain: VarLeq,
    /// `Var K ⊆ Var(dual L)`.
    pub dual: VarLeq,
    /// An SI quotient of `K` outside both `HS(L)` and `HS(dual L)`. Present
    /// for most negative verdicts; see [`crit_gate`].
    pub separating: Option<SIQuotient>,
    pub justification: String,
}

/// Decides whether `crit(Var K, Var L)` is infinite or at most `ℵ2`.
///
/// The answer is `Infinite` exactly when `Var K` is contained in `Var L` or
/// in `Var(dual L)`, since dualizing a lattice leaves its congruence lattice
/// unchanged. Otherwise `Var K` escapes both, and the bound `ℵ2` applies
/// because `Var L` is finitely generated. Each failing orientation carries
/// its own SI quotient of `K`; a single quotient failing both is reported in
/// `separating` when one exists.
pub fn crit_gate(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<CritVerdict> {
    let dual_l = Arc::new(l.dual());
    let (plain, dual) = if budget.threads > 1 {
        let (a, b) = rayon::join(|| var_leq(k, l, budget), || var_leq(k, &dual_l, budget));
        (a?, b?)
    } else {
        (var_leq(k, l, budget)?, var_leq(k, &dual_l, budget)?)
    };
    if plain.holds || dual.holds {
        let which = if plain.holds { "Var K ⊆ Var L" } else { "Var K ⊆ Var(dual L)" };
        return Ok(CritVerdict {
            verdict: Verdict::Infinite,
            plain,
            dual,
            separating: None,
            justification: format!("{which}: every SI quotient of K lies in HS of the target"),
        });
    }
    let separating = find_separating_si(k, l, budget)?;
    let justification = match &separating {
        Some(q) => format!(
            "SI quotient K/{} ({} elements) lies in neither HS(L) nor HS(dual L)",
            q.theta.render(),
            q.quotient.len()
        ),
        None => "each orientation fails on its own SI quotient of K".to_string(),
    };
    Ok(CritVerdict { verdict: Verdict::AtMostAleph2, plain, dual, separating, justification })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcRelation {
    Equal,
    /// `Conc(Var K) ⊊ Conc(Var L)`.
    Included,
    /// `Conc(Var L) ⊊ Conc(Var K)`.
    Includes,
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct ConcClassReport {
    pub k_in_l: bool,
    pub k_in_dual_l: bool,
    pub l_in_k: bool,
    pub l_in_dual_k: bool,
    pub relation: ConcRelation,
    pub isomorphic: bool,
    pub dually_isomorphic: bool,
    /// Classification of the pair, when both lattices are SI.
    pub si_class: Option<SiPairClass>,
}

/// Compares the congruence classes of `Var K` and `Var L` through the four
/// variety containments.
pub fn conc_class_report(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>, budget: &Budget) -> Result<ConcClassReport> {
    let dual_l = Arc::new(l.dual());
    let dual_k = Arc::new(k.dual());
    let k_in_l = var_leq(k, l, budget)?.holds;
    let k_in_dual_l = var_leq(k, &dual_l, budget)?.holds;
    let l_in_k = var_leq(l, k, budget)?.holds;
    let l_in_dual_k = var_leq(l, &dual_k, budget)?.holds;
    let below = k_in_l || k_in_dual_l;
    let above = l_in_k || l_in_dual_k;
    let relation = match (below, above) {
        (true, true) => ConcRelation::Equal,
        (true, false) => ConcRelation::Included,
        (false, true) => ConcRelation::Includes,
        (false, false) => ConcRelation::Incomparable,
    };
    let si_class = match si_pair_classifier(k, l, budget) {
        Ok(c) => Some(c),
        Err(crate::Error::NotSubdirectlyIrreducible(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ConcClassReport {
        k_in_l,
        k_in_dual_l,
        l_in_k,
        l_in_dual_k,
        relation,
        isomorphic: find_isomorphism(k, l).is_some(),
        dually_isomorphic: find_isomorphism(k, &dual_l).is_some(),
        si_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    #[test]
    fn gate_examples() {
        let b = Budget::default();
        let (m3, m4) = (arc(builtin::m(3)), arc(builtin::m(4)));
        let v = crit_gate(&m4, &m3, &b).unwrap();
        assert_eq!(v.verdict, Verdict::AtMostAleph2);
        assert_eq!(v.separating.unwrap().quotient.len(), 6);
        assert_eq!(crit_gate(&m3, &m4, &b).unwrap().verdict, Verdict::Infinite);
        assert_eq!(crit_gate(&m3, &arc(builtin::two()), &b).unwrap().verdict, Verdict::AtMostAleph2);
        let n5 = arc(builtin::n5());
        assert_eq!(crit_gate(&n5, &n5, &b).unwrap().verdict, Verdict::Infinite);
    }

    #[test]
    fn report_examples() {
        let b = Budget::default();
        let r = conc_class_report(&arc(builtin::chain(2)), &arc(builtin::chain(3)), &b).unwrap();
        assert_eq!(r.relation, ConcRelation::Equal);
        assert!(!r.isomorphic && !r.dually_isomorphic);
        let r = conc_class_report(&arc(builtin::m(3)), &arc(builtin::n5()), &b).unwrap();
        assert_eq!(r.relation, ConcRelation::Incomparable);
        assert_eq!(r.si_class, Some(SiPairClass::DistinctConcClasses));
        let n5 = arc(builtin::n5());
        assert_eq!(conc_class_report(&n5, &n5, &b).unwrap().relation, ConcRelation::Equal);
    }
}
