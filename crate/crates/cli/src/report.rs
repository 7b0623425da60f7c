//! Report envelope and value rendering shared by all commands.

use logunit::lattice::{GramMatrix, IsometryVerdict, RelationResult, RelationTag, SimilarityResult};
use logunit::numeric::ball::BigReal;
use rug::{Integer, Rational};
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "logunit-report/v1";

pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub text: String,
    /// False when a certification failed; the process exits with 1.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, body: Value, text: String) -> Self {
        Report { command, body, text, ok: true }
    }

    pub fn failed(mut self) -> Self {
        self.ok = false;
        self
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "ok": self.ok,
            "result": self.body,
        });
        serde_json::to_string_pretty(&v).expect("report json") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = self.text.clone();
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

/// Decimal digits worth printing for a ball at `prec` bits, capped.
fn digits(b: &BigReal) -> usize {
    ((b.prec() as f64 * std::f64::consts::LOG10_2) as usize).clamp(6, 60)
}

pub fn ball_str(b: &BigReal) -> String {
    format!("{:.*}", digits(b), b)
}

pub fn ball(b: &BigReal) -> Value {
    json!({
        "mid": b.mid().to_string_radix(10, Some(digits(b))),
        "rad": b.rad().to_string_radix(10, Some(3)),
    })
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

pub fn rational_matrix(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| rationals(r)).collect())
}

pub fn integers(v: &[Integer]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

pub fn gram(g: &GramMatrix) -> Value {
    Value::Array(g.entries().iter().map(|r| Value::Array(r.iter().map(ball).collect())).collect())
}

pub fn gram_text(g: &GramMatrix) -> String {
    g.entries()
        .iter()
        .map(|r| r.iter().map(ball_str).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn relation(r: &RelationResult) -> Value {
    match &r.tag {
        RelationTag::Found(c) => json!({"tag": "Found", "relation": integers(c), "prec": r.prec}),
        RelationTag::NoneBelow(b) => json!({"tag": "NoneBelow", "bound": b.to_string_radix(10, Some(6)), "prec": r.prec}),
    }
}

pub fn isometry(v: &IsometryVerdict) -> Value {
    match v {
        IsometryVerdict::Isometric { witness } => json!({"tag": "Isometric", "witness": witness.iter().map(|r| integers(r)).collect::<Vec<_>>()}),
        IsometryVerdict::NotIsometric { invariant, left, right } => {
            json!({"tag": "NotIsometric", "invariant": invariant, "left": ball(left), "right": ball(right)})
        }
        IsometryVerdict::Inconclusive { reason } => json!({"tag": "Inconclusive", "reason": reason}),
    }
}

pub fn isometry_text(v: &IsometryVerdict) -> String {
    match v {
        IsometryVerdict::NotIsometric { invariant, .. } => format!("NotIsometric ({invariant})"),
        IsometryVerdict::Inconclusive { reason } => format!("Inconclusive ({reason})"),
        IsometryVerdict::Isometric { .. } => "Isometric".into(),
    }
}

pub fn similarity(s: &SimilarityResult) -> Value {
    json!({"tag": s.tag(), "lambda": ball(&s.lambda), "isometry": isometry(&s.verdict)})
}
