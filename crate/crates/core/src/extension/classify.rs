use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};

/// Which case of the level-pair theorem a pair of degeneration data falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// Level one at the maximal depth `p/(p-1)`: `C(w) = w`.
    L1Max,
    /// Level one below the maximal depth: `C(w) = 0`.
    L1Sub,
    /// `delta_hi = delta_lo + 1`, `w_hi = -w_lo`.
    Case2,
    /// `delta_hi = p delta_lo < p/(p-1)`: `C(w_hi) = w_lo`.
    Case3a,
    /// Strictly between: `C(w_hi) = 0`.
    Case3b,
    /// `delta_hi = p/(p-1) > p delta_lo`: `C(w_hi) = w_hi`.
    Case3c,
    /// `delta_hi = p delta_lo = p/(p-1)`: `C(w_hi) = w_hi + w_lo`.
    Case3d,
    Fail,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::L1Max => "L1_MAX",
            CaseTag::L1Sub => "L1_SUB",
            CaseTag::Case2 => "CASE2",
            CaseTag::Case3a => "CASE3a",
            CaseTag::Case3b => "CASE3b",
            CaseTag::Case3c => "CASE3c",
            CaseTag::Case3d => "CASE3d",
            CaseTag::Fail => "FAIL",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelPairVerdict {
    /// The case selected by the depths, even when its identity fails.
    pub case: CaseTag,
    pub passed: bool,
    /// The identity that was checked, or the reason for failure.
    pub detail: String,
}

impl LevelPairVerdict {
    /// `FAIL` when the identity did not hold, otherwise the case.
    pub fn tag(&self) -> CaseTag {
        if self.passed {
            self.case
        } else {
            CaseTag::Fail
        }
    }

    fn check(case: CaseTag, ok: bool, identity: &str) -> Self {
        let detail = if ok { identity.to_string() } else { format!("{identity} does not hold") };
        LevelPairVerdict { case, passed: ok, detail }
    }

    fn fail(reason: String) -> Self {
        LevelPairVerdict { case: CaseTag::Fail, passed: false, detail: reason }
    }
}

/// First-level clauses: `0 < delta <= p/(p-1)` with the matching Cartier identity.
pub fn classify_level_one(p: u32, delta: &Rational, omega: &DifferentialForm) -> Result<LevelPairVerdict> {
    if omega.is_zero() {
        return Err(Error::ZeroForm);
    }
    let top = rational::p_over_p_minus_one(p);
    if !delta.is_positive() || delta > &top {
        return Ok(LevelPairVerdict::fail(format!("depth {} outside (0, p/(p-1)]", rational::format(delta))));
    }
    let c = omega.cartier_by_expansion();
    Ok(if *delta == top {
        LevelPairVerdict::check(CaseTag::L1Max, c == *omega, "C(w) = w")
    } else {
        LevelPairVerdict::check(CaseTag::L1Sub, c.is_zero(), "C(w) = 0")
    })
}

/// Classifies consecutive levels `(delta_lo, w_lo) -> (delta_hi, w_hi)`.
/// A zero lower depth falls back to the first-level clauses for the upper pair.
pub fn classify_level_pair(
    p: u32,
    delta_lo: &Rational,
    omega_lo: Option<&DifferentialForm>,
    delta_hi: &Rational,
    omega_hi: &DifferentialForm,
) -> Result<LevelPairVerdict> {
    if omega_hi.is_zero() {
        return Err(Error::ZeroForm);
    }
    if delta_lo.is_zero() {
        return classify_level_one(p, delta_hi, omega_hi);
    }
    let omega_lo = omega_lo.filter(|w| !w.is_zero()).ok_or(Error::ZeroForm)?;
    let pr = int(p as i64);
    let threshold = ratio(1, p as i64 - 1);
    let top = rational::p_over_p_minus_one(p);
    if delta_lo > &threshold {
        if *delta_hi != delta_lo + int(1) {
            return Ok(LevelPairVerdict::fail(format!(
                "depth {} should be {} + 1",
                rational::format(delta_hi),
                rational::format(delta_lo)
            )));
        }
        return Ok(LevelPairVerdict::check(CaseTag::Case2, *omega_hi == omega_lo.neg(), "w_hi = -w_lo"));
    }
    let low = &pr * delta_lo;
    if delta_hi < &low || delta_hi > &top {
        return Ok(LevelPairVerdict::fail(format!("depth {} outside [{}, p/(p-1)]", rational::format(delta_hi), rational::format(&low))));
    }
    let c = omega_hi.cartier_by_expansion();
    let at_low = *delta_hi == low;
    let at_top = *delta_hi == top;
    Ok(match (at_low, at_top) {
        (true, false) => LevelPairVerdict::check(CaseTag::Case3a, c == *omega_lo, "C(w_hi) = w_lo"),
        (false, false) => LevelPairVerdict::check(CaseTag::Case3b, c.is_zero(), "C(w_hi) = 0"),
        (false, true) => LevelPairVerdict::check(CaseTag::Case3c, c == *omega_hi, "C(w_hi) = w_hi"),
        (true, true) => LevelPairVerdict::check(CaseTag::Case3d, c == omega_hi.add(omega_lo), "C(w_hi) = w_hi + w_lo"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn form(f: &Field, c: i64, poles: &[(i64, u64)]) -> DifferentialForm {
        let poles: Vec<_> = poles.iter().map(|&(a, m)| (f.from_int(a), m)).collect();
        DifferentialForm::from_poles(f, f.from_int(c), &poles)
    }

    fn tag(p: u32, dl: Rational, wl: &DifferentialForm, dh: Rational, wh: &DifferentialForm) -> CaseTag {
        classify_level_pair(p, &dl, Some(wl), &dh, wh).unwrap().tag()
    }

    #[test]
    fn spec_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(tag(2, ratio(1, 2), &form(&f2, 1, &[(0, 2), (1, 2)]), int(1), &form(&f2, 1, &[(0, 3), (1, 4)])), CaseTag::Case3a);
        assert_eq!(tag(2, int(1), &form(&f2, 1, &[(0, 2)]), int(2), &form(&f2, 1, &[(0, 2), (1, 1)])), CaseTag::Case3d);
        assert_eq!(tag(2, int(1), &form(&f2, 1, &[(0, 2)]), int(3), &form(&f2, 1, &[(0, 2)])), CaseTag::Fail);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(tag(3, ratio(3, 2), &form(&f3, 1, &[(0, 3)]), ratio(5, 2), &form(&f3, -1, &[(0, 3)])), CaseTag::Case2);
        assert_eq!(tag(3, ratio(1, 2), &form(&f3, 1, &[(0, 2)]), ratio(3, 2), &form(&f3, 1, &[(0, 2), (1, 1), (2, 1)])), CaseTag::Case3d);
    }

    #[test]
    fn level_one() {
        let f2 = Field::prime(2).unwrap();
        let log = form(&f2, 1, &[(0, 1), (1, 1)]);
        assert_eq!(classify_level_one(2, &int(2), &log).unwrap().tag(), CaseTag::L1Max);
        assert_eq!(classify_level_one(2, &int(1), &form(&f2, 1, &[(0, 2)])).unwrap().tag(), CaseTag::L1Sub);
        assert_eq!(classify_level_one(2, &int(1), &log).unwrap().tag(), CaseTag::Fail);
    }
}
