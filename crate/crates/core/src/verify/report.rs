use std::fmt;

use crate::model::{ModelParams, RadialRule, ShoOffset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `measured` is judged against `reference` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `|measured - reference| ≤ tolerance`
    Within,
    /// `|measured - reference| > tolerance`
    Exceeds,
    /// `measured > reference`
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    pub status: CheckStatus,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub provenance: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        relation: Relation,
        measured: f64,
        reference: f64,
        tolerance: f64,
        provenance: impl Into<String>,
    ) -> Self {
        let diff = (measured - reference).abs();
        // comparisons are written so that NaN fails
        let ok = match relation {
            Relation::Within => diff <= tolerance,
            Relation::Exceeds => diff > tolerance,
            Relation::Above => measured > reference,
        };
        Self {
            name: name.into(),
            relation,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            reference,
            tolerance,
            provenance: provenance.into(),
        }
    }

    pub fn within(
        name: impl Into<String>,
        measured: f64,
        reference: f64,
        tolerance: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self::new(
            name,
            Relation::Within,
            measured,
            reference,
            tolerance,
            provenance,
        )
    }

    pub fn exceeds(
        name: impl Into<String>,
        measured: f64,
        reference: f64,
        tolerance: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self::new(
            name,
            Relation::Exceeds,
            measured,
            reference,
            tolerance,
            provenance,
        )
    }

    pub fn above(
        name: impl Into<String>,
        measured: f64,
        bound: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self::new(name, Relation::Above, measured, bound, 0.0, provenance)
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn deviation(&self) -> f64 {
        (self.measured - self.reference).abs()
    }
}

/// The SHO additive constant and radial rule that the numerics select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub offset: ShoOffset,
    pub radial_rule: RadialRule,
}

impl Resolution {
    /// The pair the numerics are expected to select.
    pub const EXPECTED: Resolution = Resolution {
        offset: ShoOffset::One,
        radial_rule: RadialRule::Candidate,
    };
    /// The constants exactly as printed.
    pub const PUBLISHED: Resolution = Resolution {
        offset: ShoOffset::Half,
        radial_rule: RadialRule::Published,
    };
}

/// A computed energy with a human-readable label (quantum numbers, route).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedLevel {
    pub label: String,
    pub energy: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub params: ModelParams,
    pub checks: Vec<Check>,
    /// Present iff resolution checks ran as part of this report.
    pub resolved: Option<Resolution>,
    pub levels: Vec<ObservedLevel>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            checks: Vec::new(),
            resolved: None,
            levels: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Append another report's checks, levels and notes; a resolution in
    /// `other` is carried over.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.levels.extend(other.levels);
        self.notes.extend(other.notes);
        if other.resolved.is_some() {
            self.resolved = other.resolved;
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::within("a", 1.0, 1.05, 0.1, "").passed());
        assert!(!Check::within("a", 1.0, 1.2, 0.1, "").passed());
        assert!(Check::exceeds("a", 1.0, 1.2, 0.1, "").passed());
        assert!(!Check::exceeds("a", 1.0, 1.05, 0.1, "").passed());
        assert!(Check::above("a", 1e-9, 0.0, "").passed());
        assert!(!Check::above("a", 0.0, 0.0, "").passed());
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Check::within("a", f64::NAN, 0.0, 1.0, "").passed());
        assert!(!Check::exceeds("a", f64::NAN, 0.0, 1.0, "").passed());
        assert!(!Check::above("a", f64::NAN, 0.0, "").passed());
    }

    #[test]
    fn report_passes_iff_every_check_passes() {
        let params = ModelParams::new(1.0, 3.0).unwrap();
        let mut r = VerificationReport::new(params);
        assert!(r.passed());
        r.push(Check::within("ok", 1.0, 1.0, 0.0, "trivial"));
        assert!(r.passed());
        r.push(Check::within("bad", 1.0, 2.0, 0.5, "trivial"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.find("bad").unwrap().deviation(), 1.0);
    }

    #[test]
    fn merge_keeps_order_and_resolution() {
        let params = ModelParams::new(1.0, 3.0).unwrap();
        let mut a = VerificationReport::new(params);
        a.push(Check::within("first", 0.0, 0.0, 0.0, ""));
        let mut b = VerificationReport::new(params);
        b.resolved = Some(Resolution::EXPECTED);
        b.push(Check::within("second", 0.0, 0.0, 0.0, ""));
        a.merge(b);
        let names: Vec<_> = a.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["first", "second"]);
        assert_eq!(a.resolved, Some(Resolution::EXPECTED));
    }
}
