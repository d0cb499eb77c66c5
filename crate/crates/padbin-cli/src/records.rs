//! Output records and their wire formats. Every subcommand emits the same
//! record shape so downstream tooling can treat all sweeps uniformly.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use padbin::Valuation;

/// Observed order of a checked quantity; `Infinite` means the quantity was
/// exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Order::Finite(v) => v >= bound,
            Order::Infinite => true,
        }
    }
}

impl From<Valuation> for Order {
    fn from(v: Valuation) -> Order {
        match v {
            Valuation::Finite(x) => Order::Finite(x),
            Valuation::Infinite => Order::Infinite,
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(v) => s.serialize_i64(*v),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// One verification outcome. `pass` always means
/// `observed_order >= required_order`; identity checks encode success as
/// the degenerate pair 0/0 and failure as -1/0 so the same rule applies.
/// Big integers travel as decimal strings to avoid any precision loss.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    #[serde(serialize_with = "serialize_inputs")]
    pub inputs: Vec<(&'static str, i128)>,
    pub observed_order: Order,
    pub required_order: i64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
}

fn serialize_inputs<S: Serializer>(
    inputs: &[(&'static str, i128)],
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(inputs.len()))?;
    for (key, val) in inputs {
        map.serialize_entry(key, val)?;
    }
    map.end()
}

impl CheckRecord {
    pub fn order_check(
        check: &'static str,
        inputs: Vec<(&'static str, i128)>,
        observed: Order,
        required: i64,
    ) -> CheckRecord {
        CheckRecord {
            check,
            inputs,
            observed_order: observed,
            required_order: required,
            pass: observed.at_least(required),
            value: None,
            quotient: None,
        }
    }

    pub fn identity_check(
        check: &'static str,
        inputs: Vec<(&'static str, i128)>,
        holds: bool,
    ) -> CheckRecord {
        CheckRecord::order_check(
            check,
            inputs,
            Order::Finite(if holds { 0 } else { -1 }),
            0,
        )
    }

    pub fn with_value(mut self, value: String) -> CheckRecord {
        self.value = Some(value);
        self
    }

    pub fn with_quotient(mut self, quotient: String) -> CheckRecord {
        self.quotient = Some(quotient);
        self
    }

    pub fn to_jsonl(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }

    /// CSV row; `inputs` flattens to `k=v` pairs joined by `;`. No field
    /// ever contains a comma or quote, so no escaping is needed.
    pub fn to_csv_row(&self) -> String {
        let inputs = self
            .inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{},{}",
            self.check,
            inputs,
            self.observed_order,
            self.required_order,
            self.pass,
            self.value.as_deref().unwrap_or(""),
            self.quotient.as_deref().unwrap_or(""),
        )
    }

    pub fn csv_header() -> &'static str {
        "check,inputs,observed_order,required_order,pass,value,quotient"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_shape_is_stable() {
        let rec = CheckRecord::order_check(
            "jacobsthal",
            vec![("a", 2), ("b", 1), ("p", 5)],
            Order::Finite(3),
            3,
        );
        assert_eq!(
            rec.to_jsonl(),
            r#"{"check":"jacobsthal","inputs":{"a":2,"b":1,"p":5},"observed_order":3,"required_order":3,"pass":true}"#
        );
    }

    #[test]
    fn infinite_order_serializes_as_string() {
        let rec = CheckRecord::order_check("x", vec![], Order::Infinite, 7);
        assert!(rec.pass);
        assert!(rec.to_jsonl().contains(r#""observed_order":"inf""#));
    }

    #[test]
    fn optional_fields_appear_when_set() {
        let rec = CheckRecord::order_check("corollary", vec![("p", 5)], Order::Finite(3), 3)
            .with_value("-250".into())
            .with_quotient("-2".into());
        let line = rec.to_jsonl();
        assert!(line.ends_with(r#""value":"-250","quotient":"-2"}"#));
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let rec = CheckRecord::identity_check("newton-girard", vec![("b", 1), ("p", 5)], true);
        let row = rec.to_csv_row();
        assert_eq!(
            row.split(',').count(),
            CheckRecord::csv_header().split(',').count()
        );
        assert_eq!(row, "newton-girard,b=1;p=5,0,0,true,,");
    }

    #[test]
    fn failed_identity_encodes_negative_observed() {
        let rec = CheckRecord::identity_check("x", vec![], false);
        assert!(!rec.pass);
        assert_eq!(rec.observed_order, Order::Finite(-1));
    }
}
