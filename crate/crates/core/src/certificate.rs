//! Structured verdicts: every check keeps both sides so a reader can redo the
//! comparison by hand.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::power::Quantity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    HypothesisError,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::HypothesisError => "hypothesis_error",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    /// `lhs` is the square of the positive integer `rhs`.
    #[serde(rename = "is_square_of")]
    IsSquareOf,
}

impl Relation {
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
            Relation::Eq | Relation::IsSquareOf => ord == Ordering::Equal,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::IsSquareOf => "is_square_of",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub statement: String,
    pub lhs: Quantity,
    pub rel: Relation,
    pub rhs: Quantity,
    pub pass: bool,
}

impl Check {
    /// Decides `lhs rel rhs` exactly.
    pub fn compare(statement: impl Into<String>, lhs: Quantity, rel: Relation, rhs: Quantity) -> Self {
        let pass = match rel {
            Relation::IsSquareOf => match &rhs {
                Quantity::Rational(root) if root.is_integer() && root.is_positive() => {
                    lhs.cmp_exact(&Quantity::Rational(root * root)) == Ordering::Equal
                }
                _ => false,
            },
            _ => rel.holds(lhs.cmp_exact(&rhs)),
        };
        Check {
            statement: statement.into(),
            lhs,
            rel,
            rhs,
            pass,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} {} {}",
            if self.pass { "pass" } else { "FAIL" },
            self.statement,
            self.lhs,
            self.rel.symbol(),
            self.rhs
        )
    }
}

/// Aggregate verdict over a list of checks. `Feasible` holds exactly when
/// every check passes; a hypothesis error carries no checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityCertificate {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FeasibilityCertificate {
    pub fn from_checks(checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().all(|c| c.pass) {
            Verdict::Feasible
        } else {
            Verdict::Infeasible
        };
        FeasibilityCertificate {
            verdict,
            checks,
            note: None,
        }
    }

    pub fn hypothesis_error(reason: impl Into<String>) -> Self {
        FeasibilityCertificate {
            verdict: Verdict::HypothesisError,
            checks: Vec::new(),
            note: Some(reason.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }

    pub fn check(&self, statement_prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.statement.starts_with(statement_prefix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_checks() {
        let ok = Check::compare("a", Quantity::int(1), Relation::Le, Quantity::int(2));
        let bad = Check::compare("b", Quantity::int(3), Relation::Le, Quantity::int(2));
        assert!(ok.pass && !bad.pass);
        assert_eq!(
            FeasibilityCertificate::from_checks(vec![ok.clone()]).verdict,
            Verdict::Feasible
        );
        assert_eq!(
            FeasibilityCertificate::from_checks(vec![ok, bad]).verdict,
            Verdict::Infeasible
        );
    }

    #[test]
    fn square_relation() {
        let c = Check::compare("sq", Quantity::int(49), Relation::IsSquareOf, Quantity::int(7));
        assert!(c.pass);
        let c = Check::compare("sq", Quantity::int(49), Relation::IsSquareOf, Quantity::int(-7));
        assert!(!c.pass);
        let c = Check::compare("sq", Quantity::ratio(1, 4), Relation::IsSquareOf, Quantity::ratio(1, 2));
        assert!(!c.pass);
    }

    #[test]
    fn json_shape() {
        let cert = FeasibilityCertificate::from_checks(vec![Check::compare(
            "x",
            Quantity::int(1),
            Relation::Le,
            Quantity::int(2),
        )]);
        let j = serde_json::to_value(&cert).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "verdict": "feasible",
                "checks": [{"statement": "x", "lhs": "1", "rel": "<=", "rhs": "2", "pass": true}]
            })
        );
    }
}
