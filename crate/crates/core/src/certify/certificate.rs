//! Certificate records and their JSON / CSV forms.

use serde_json::{json, Map, Value as Json};

use crate::exact::{format_rational, QuadExt, RatInterval, Rational, Sign};
use crate::moments::Kappa;
use crate::poly::CoeffVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Interval,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Interval => "interval",
        }
    }
}

/// Outcome of one condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// The enclosure straddles the threshold.
    Indeterminate,
    /// Holds by construction (`I'(1) = 0` in interval mode) and is not re-checked.
    Structural,
    /// Skipped because an earlier condition already failed.
    NotEvaluated,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Structural => "structural",
            Verdict::NotEvaluated => "not-evaluated",
        }
    }

    /// True for `Pass` and `Structural`.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Structural)
    }

    /// Verdict for "the quantity has sign `want`" given a decided or
    /// undecided sign. Only `want` counts as a pass.
    pub fn from_sign(sign: Option<Sign>, want: Sign) -> Self {
        match sign {
            Some(s) if s == want => Verdict::Pass,
            Some(_) => Verdict::Fail,
            None => Verdict::Indeterminate,
        }
    }

    /// Conjunction: fail dominates indeterminate, which dominates pass.
    /// A skipped condition adds nothing; the condition that caused the skip
    /// already carries the outcome.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (NotEvaluated, NotEvaluated) => NotEvaluated,
            _ => Pass,
        }
    }
}

/// A certified value in one of the three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Rational(Rational),
    Quad(QuadExt),
    Interval(RatInterval),
}

impl Value {
    pub fn to_json(&self) -> Json {
        match self {
            Value::Rational(r) => json!(format_rational(r)),
            Value::Quad(x) => json!({
                "p": format_rational(x.p()),
                "q": format_rational(x.q()),
                "D": format_rational(x.radicand()),
            }),
            Value::Interval(iv) => json!({ "lo": format_rational(iv.lo()), "hi": format_rational(iv.hi()) }),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Rational(r) => crate::exact::rational_to_f64(r),
            Value::Quad(x) => x.to_f64(),
            Value::Interval(iv) => crate::exact::rational_to_f64(&iv.midpoint()),
        }
    }
}

/// A reported quantity: value (if computed) and its sign (if decided).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Entry {
    pub value: Option<Value>,
    pub sign: Option<Sign>,
}

impl Entry {
    pub fn new(value: Value, sign: Option<Sign>) -> Self {
        Self { value: Some(value), sign }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "value": self.value.as_ref().map_or(Json::Null, Value::to_json),
            "sign": self.sign.map_or(Json::Null, |s| json!(s.name())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    pub discriminant: Verdict,
    pub i1: Verdict,
    pub iprime1: Verdict,
    pub idoubleprime1: Verdict,
    pub j1: Verdict,
}

impl Verdicts {
    pub fn all(v: Verdict) -> Self {
        Self { discriminant: v, i1: v, iprime1: v, idoubleprime1: v, j1: v }
    }

    pub fn overall(&self) -> Verdict {
        let iprime = if self.iprime1 == Verdict::Structural { Verdict::Pass } else { self.iprime1 };
        self.discriminant.and(self.i1).and(iprime).and(self.idoubleprime1).and(self.j1)
    }

    fn to_json(self) -> Json {
        json!({
            "discriminant": self.discriminant.name(),
            "i1": self.i1.name(),
            "iprime1": self.iprime1.name(),
            "idoubleprime1": self.idoubleprime1.name(),
            "j1": self.j1.name(),
        })
    }
}

/// Per-`(n, T_c range)` record of the sign conditions
/// `discriminant > 0, I(1) > 0, I'(1) = 0, I''(1) < 0, J(1) < 0`.
///
/// In exact mode all values are divided by the common positive factor
/// `kappa` of the moments, which changes no sign and not `a_0`. Interval
/// mode reports the values themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub n: i64,
    pub tail: CoeffVector,
    pub tc: RatInterval,
    pub mode: Mode,
    pub kappa: Option<Kappa>,
    pub discriminant: Entry,
    pub a0: Option<Value>,
    pub i1: Entry,
    pub iprime1: Entry,
    pub idoubleprime1: Entry,
    pub j1: Entry,
    pub verdicts: Verdicts,
    pub overall: Verdict,
    /// Number of Tc sub-intervals examined (1 in exact mode).
    pub leaves: usize,
    pub elapsed_ms: u64,
}

impl Certificate {
    pub fn d(&self) -> usize {
        self.tail.degree()
    }

    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn to_json(&self) -> Json {
        let mut m = Map::new();
        m.insert("n".into(), json!(self.n));
        m.insert("d".into(), json!(self.d()));
        m.insert("tail".into(), json!(self.tail.tail_strings()));
        m.insert("tc_lo".into(), json!(format_rational(self.tc.lo())));
        m.insert("tc_hi".into(), json!(format_rational(self.tc.hi())));
        m.insert("mode".into(), json!(self.mode.name()));
        m.insert(
            "kappa".into(),
            match self.kappa {
                Some(Kappa::Pi) => json!("pi"),
                Some(Kappa::One) => json!("1"),
                None => Json::Null,
            },
        );
        m.insert("discriminant".into(), self.discriminant.to_json());
        m.insert("a0".into(), self.a0.as_ref().map_or(Json::Null, Value::to_json));
        m.insert("i1".into(), self.i1.to_json());
        m.insert("iprime1".into(), self.iprime1.to_json());
        m.insert("idoubleprime1".into(), self.idoubleprime1.to_json());
        m.insert("j1".into(), self.j1.to_json());
        m.insert("verdicts".into(), self.verdicts.to_json());
        m.insert("overall".into(), json!(self.overall.name()));
        m.insert("leaves".into(), json!(self.leaves));
        m.insert("version".into(), json!(crate::VERSION));
        m.insert("elapsed_ms".into(), json!(self.elapsed_ms));
        Json::Object(m)
    }

    pub const CSV_HEADER: &'static str = "n,d,discrim_sign,i1_sign,iprime1_zero,i2_sign,j1_sign,pass";

    pub fn csv_row(&self) -> String {
        let sym = |e: &Entry| e.sign.map_or("?", Sign::symbol);
        let iprime_zero = match self.verdicts.iprime1 {
            Verdict::Pass => "true",
            Verdict::Structural => "structural",
            Verdict::NotEvaluated => "?",
            _ => "false",
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.d(),
            sym(&self.discriminant),
            sym(&self.i1),
            iprime_zero,
            sym(&self.idoubleprime1),
            sym(&self.j1),
            self.passed()
        )
    }
}
