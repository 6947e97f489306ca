//! Finite criteria for universality and per-lattice certification.
//!
//! A certificate here is never a proof by itself. The Ramanujan route
//! relies on Ramanujan's classification of diagonal forms, the
//! `Criterion290` route on the 290-Theorem, and both only need the finite
//! facts checked below. Escalator forms cannot use the 290 route (the
//! theorem's proof depends on them), so they fall through to `AdHocRequired`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{EnumError, Enumerator, RepresentationWitness};
use crate::escalate::{is_escalator, EscalateError, Regime};
use crate::hermitian::{HermitianError, HermitianLattice};
use crate::qform::{
    extract_basis, is_equivalent, match_paper_form, trace_form, MatchVerdict, QformError, QuadraticForm,
};

/// Default bound for empirical represented-set checks.
pub const DEFAULT_EMPIRICAL_BOUND: i64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Form(#[from] QformError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Escalate(#[from] EscalateError),
    #[error("lattice has rank {0}; certification needs a binary lattice (rank-4 trace form)")]
    NotBinary(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionSet {
    /// Critical numbers of the 15-Theorem.
    S15,
    /// Critical numbers of the 290-Theorem.
    S290,
    /// The Hermitian analogue of `S15`; used only as a consistency check.
    S15H,
}

const S15: [i64; 9] = [1, 2, 3, 5, 6, 7, 10, 14, 15];
const S290: [i64; 29] =
    [1, 2, 3, 5, 6, 7, 10, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 34, 35, 37, 42, 58, 93, 110, 145, 203, 290];
const S15H: [i64; 10] = [1, 2, 3, 5, 6, 7, 10, 13, 14, 15];

impl CriterionSet {
    pub fn name(self) -> &'static str {
        match self {
            CriterionSet::S15 => "S15",
            CriterionSet::S290 => "S290",
            CriterionSet::S15H => "S15H",
        }
    }

    /// Sorted ascending.
    pub fn values(self) -> &'static [i64] {
        match self {
            CriterionSet::S15 => &S15,
            CriterionSet::S290 => &S290,
            CriterionSet::S15H => &S15H,
        }
    }

    /// Accepts `15`, `290`, `15h` and the set names, case-insensitively.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "15" | "s15" => Some(CriterionSet::S15),
            "290" | "s290" => Some(CriterionSet::S290),
            "15h" | "s15h" => Some(CriterionSet::S15H),
            _ => None,
        }
    }
}

pub fn criterion_sets() -> [CriterionSet; 3] {
    [CriterionSet::S15, CriterionSet::S290, CriterionSet::S15H]
}

/// Outcome of checking one criterion set against one form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub set: CriterionSet,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<i64>,
    /// Witnesses for every member on a pass; for the members preceding
    /// the failure otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<RepresentationWitness>>,
}

/// Runs `represents` on each member of `set` in ascending order.
pub fn check_criterion(q: &QuadraticForm, set: CriterionSet) -> Result<CriterionCheck, CriteriaError> {
    let e = Enumerator::new(q)?;
    let mut witnesses = Vec::with_capacity(set.values().len());
    for &t in set.values() {
        match e.represents(t)? {
            Some(w) => witnesses.push(w),
            None => {
                return Ok(CriterionCheck { set, pass: false, first_failure: Some(t), witnesses: Some(witnesses) });
            }
        }
    }
    Ok(CriterionCheck { set, pass: true, first_failure: None, witnesses: Some(witnesses) })
}

/// Diagonal quaternary forms whose universality is taken from Ramanujan.
pub fn ramanujan_diagonals() -> Vec<[i64; 4]> {
    vec![
        [1, 1, 1, 1],
        [1, 1, 2, 2],
        [1, 2, 2, 4],
        [1, 2, 5, 10],
        [1, 1, 3, 3],
        [1, 3, 3, 6],
        [1, 2, 4, 8],
        [1, 2, 3, 6],
        [1, 2, 3, 10],
    ]
}

/// The whitelisted diagonal form equivalent to `q`, if any.
pub fn ramanujan_match(q: &QuadraticForm) -> Result<Option<[i64; 4]>, CriteriaError> {
    if q.n() != 4 {
        return Ok(None);
    }
    if q.is_diagonal() {
        let mut d: Vec<i64> = (0..4).map(|i| q.coeff(i, i)).collect();
        d.sort_unstable();
        return Ok(ramanujan_diagonals().into_iter().find(|r| r[..] == d[..]));
    }
    // a non-diagonal basis of a diagonal class
    for r in ramanujan_diagonals() {
        if is_equivalent(q, &QuadraticForm::diagonal(&r)?)?.is_some() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Route {
    RamanujanDiagonal,
    Criterion290,
    AdHocRequired,
}

/// Per-lattice certification outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub label: String,
    pub field_m: i64,
    /// Trace form on the (possibly redundant) generators.
    pub trace_form: String,
    /// Positive-definite form after basis extraction.
    pub reduced_form: String,
    pub matched_paper_form: Option<String>,
    pub match_verdict: Option<MatchVerdict>,
    pub route: Route,
    pub escalator: bool,
    pub checks: Vec<CriterionCheck>,
    /// Present for `AdHocRequired`.
    pub empirical_bound: Option<i64>,
    pub empirical_first_missing: Option<i64>,
    /// True when every finite hypothesis of the chosen route holds.
    pub certified: bool,
    pub note: String,
}

impl CertificationReport {
    pub fn check(&self, set: CriterionSet) -> Option<&CriterionCheck> {
        self.checks.iter().find(|c| c.set == set)
    }
}

const NOTE_RAMANUJAN: &str = "diagonal form on Ramanujan's list; universality comes from Ramanujan's theorem, the criterion checks are consistency checks";
const NOTE_290: &str =
    "not an escalator and represents S290; universality comes from the 290-Theorem, not from this computation";
const NOTE_ADHOC: &str =
    "route needs an ad hoc argument; the empirical represented-set check proves nothing beyond its bound";

/// Routes `l` to a certification argument and records the finite checks.
pub fn certify(l: &HermitianLattice, empirical_bound: i64) -> Result<CertificationReport, CriteriaError> {
    certify_against(l, empirical_bound, None)
}

/// As [`certify`], also matching the extracted form against a printed form.
pub fn certify_against(
    l: &HermitianLattice,
    empirical_bound: i64,
    printed: Option<&QuadraticForm>,
) -> Result<CertificationReport, CriteriaError> {
    if l.rank() != 2 {
        return Err(CriteriaError::NotBinary(l.rank()));
    }
    let full = trace_form(l)?;
    let (q, _) = extract_basis(&full)?;
    let (matched_paper_form, match_verdict) = match printed {
        Some(p) => {
            let v = if full.is_positive_definite() && full.n() == p.n() {
                match_paper_form(&full, p)?
            } else {
                match_paper_form(&q, p)?
            };
            (Some(p.to_alias_string()), Some(v))
        }
        None => (None, None),
    };
    let checks = criterion_sets().into_iter().map(|s| check_criterion(&q, s)).collect::<Result<Vec<_>, _>>()?;
    let s290 = checks.iter().find(|c| c.set == CriterionSet::S290).is_some_and(|c| c.pass);
    let escalator = is_escalator(&q, Regime::IntegerValued)?;
    let (route, empirical_bound, empirical_first_missing, certified, note) = if ramanujan_match(&q)?.is_some() {
        (Route::RamanujanDiagonal, None, None, true, NOTE_RAMANUJAN)
    } else if !escalator && s290 {
        (Route::Criterion290, None, None, true, NOTE_290)
    } else {
        let missing = Enumerator::new(&q)?.represented_set(empirical_bound)?.first_missing();
        (Route::AdHocRequired, Some(empirical_bound), missing, s290 && missing.is_none(), NOTE_ADHOC)
    };
    Ok(CertificationReport {
        label: l.label().map_or_else(|| l.to_string(), str::to_owned),
        field_m: l.field().m(),
        trace_form: full.to_alias_string(),
        reduced_form: q.to_alias_string(),
        matched_paper_form,
        match_verdict,
        route,
        escalator,
        checks,
        empirical_bound,
        empirical_first_missing,
        certified,
        note: note.to_owned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::catalog_entry;
    use crate::qform::parse_form;

    fn form(s: &str) -> QuadraticForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn set_constants() {
        let [s15, s290, s15h] = criterion_sets();
        assert_eq!(s290.values().len(), 29);
        assert_eq!(*s290.values().last().unwrap(), 290);
        assert_eq!(s15.values().len(), 9);
        assert_eq!(s15h.values().len(), 10);
        assert!(s15h.values().contains(&13) && !s15.values().contains(&13));
        for s in criterion_sets() {
            assert!(s.values().windows(2).all(|w| w[0] < w[1]));
        }
        assert!(s15.values().iter().all(|v| s290.values().contains(v) && s15h.values().contains(v)));
        assert_eq!(CriterionSet::parse("15h"), Some(CriterionSet::S15H));
        assert_eq!(CriterionSet::parse("16"), None);
    }

    #[test]
    fn criterion_examples() {
        let c = check_criterion(&form("x^2+2y^2"), CriterionSet::S15).unwrap();
        assert!(!c.pass);
        assert_eq!(c.first_failure, Some(5));
        let q = form("w^2+x^2+y^2+z^2");
        let c = check_criterion(&q, CriterionSet::S15).unwrap();
        assert!(c.pass);
        assert!(c.witnesses.unwrap().iter().all(|w| w.verify(&q)));
        let q = form("w^2+wx+x^2+2y^2+2yz+2z^2");
        let c = check_criterion(&q, CriterionSet::S290).unwrap();
        assert!(c.pass);
        assert_eq!(c.witnesses.as_ref().unwrap().len(), 29);
    }

    #[test]
    fn ramanujan_list() {
        let r = ramanujan_diagonals();
        assert!(r.contains(&[1, 1, 2, 2]));
        assert!(r.contains(&[1, 2, 3, 6]));
        assert!(!r.contains(&[1, 1, 1, 7]));
        assert_eq!(ramanujan_match(&form("w^2+2x^2+3y^2+6z^2")).unwrap(), Some([1, 2, 3, 6]));
        assert_eq!(ramanujan_match(&form("6w^2+x^2+3y^2+2z^2")).unwrap(), Some([1, 2, 3, 6]));
        assert_eq!(ramanujan_match(&form("w^2+x^2+y^2+7z^2")).unwrap(), None);
    }

    #[test]
    fn certify_routes() {
        let r = certify(&catalog_entry("Qm1:<1,1>").unwrap(), 200).unwrap();
        assert_eq!(r.route, Route::RamanujanDiagonal);
        assert!(r.certified);

        let r = certify(&catalog_entry("Qm11:<1,1>").unwrap(), 200).unwrap();
        assert_eq!(r.route, Route::Criterion290);
        assert!(!r.escalator);
        assert!(r.check(CriterionSet::S290).unwrap().pass);

        // reached by the chain x^2 -> x^2+2y^2 -> x^2+xy+y^2+2z^2, so it is
        // an escalator of the built tree and cannot use the 290 route
        let r = certify(&catalog_entry("Qm3:<1,2>").unwrap(), 300).unwrap();
        assert!(r.escalator);
        assert_eq!(r.route, Route::AdHocRequired);
        assert!(r.certified);

        let r = certify(&catalog_entry("Qm7:<1,3>").unwrap(), 500).unwrap();
        assert_eq!(r.route, Route::AdHocRequired);
        assert!(r.escalator);
        assert!(r.check(CriterionSet::S290).unwrap().pass);
        assert_eq!(r.empirical_bound, Some(500));
        assert_eq!(r.empirical_first_missing, None);
        assert!(r.certified);
    }
}
