//! Checkable derivations of pairs in a finitely generated bend congruence.
//!
//! Membership of a pair in `Bend(gens)` is not decided here. Instead a
//! [`DerivationTrace`] lists the rule applications that produce the pair from
//! the bend relations of the generators, and [`verify_trace`] replays them
//! under formal polynomial equality. The rules are the congruence axioms plus
//! closure of a congruence under twisted products with arbitrary pairs.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::poly::{Mode, Monomial, Pair, PolyError, Polynomial, Term};
use crate::text::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Bend relation `(g, g_î)` of generator `generator` with `deleted = i`.
    Gen { generator: usize, deleted: Monomial },
    Refl(Polynomial),
    Sym(usize),
    Trans(usize, usize),
    Add(usize, usize),
    /// `(a, b), (c, d) ⊢ (ac, bd)`.
    Mul(usize, usize),
    /// `α ∈ C ⊢ αβ ∈ C` for an arbitrary pair `β`.
    Twist(usize, Pair),
}

impl Rule {
    fn name(&self) -> &'static str {
        match self {
            Rule::Gen { .. } => "gen",
            Rule::Refl(_) => "refl",
            Rule::Sym(_) => "sym",
            Rule::Trans(..) => "trans",
            Rule::Add(..) => "add",
            Rule::Mul(..) => "mul",
            Rule::Twist(..) => "twist",
        }
    }

    fn premises(&self) -> Vec<usize> {
        match self {
            Rule::Gen { .. } | Rule::Refl(_) => vec![],
            Rule::Sym(i) | Rule::Twist(i, _) => vec![*i],
            Rule::Trans(i, j) | Rule::Add(i, j) | Rule::Mul(i, j) => vec![*i, *j],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: Rule,
    pub conclusion: Pair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub generators: Vec<Polynomial>,
    pub steps: Vec<DerivationStep>,
    pub goal: Pair,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("trace has no steps")]
    Empty,
    #[error("premise {premise} does not precede the step")]
    ForwardReference { premise: usize },
    #[error("generator index {0} out of range")]
    NoSuchGenerator(usize),
    #[error("monomial {0} is not in the generator's support")]
    NotInSupport(Monomial),
    #[error("premises do not chain: {left} vs {right}")]
    NotChained { left: String, right: String },
    #[error("conclusion {found} differs from the derived pair {expected}")]
    ConclusionMismatch { expected: String, found: String },
    #[error("last conclusion {found} differs from the goal {goal}")]
    GoalMismatch { goal: String, found: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Why a trace was rejected; `step` is the index of the first failing step.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct Rejection {
    pub step: usize,
    pub reason: RejectReason,
}

/// A bend relation of one generator, with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BendGenerator {
    pub generator: usize,
    pub deleted: Monomial,
    pub pair: Pair,
}

/// All bend relations of all generators, generator by generator.
pub fn instantiate_bend_generators(gens: &[Polynomial]) -> Vec<BendGenerator> {
    gens.iter()
        .enumerate()
        .flat_map(|(g, f)| {
            f.support().into_iter().map(move |m| BendGenerator {
                generator: g,
                pair: Pair { left: f.clone(), right: f.delete_term(&m).expect("support monomial") },
                deleted: m,
            })
        })
        .collect()
}

fn derive(gens: &[Polynomial], done: &[DerivationStep], rule: &Rule) -> Result<Pair, RejectReason> {
    let at = done.len();
    for p in rule.premises() {
        if p >= at {
            return Err(RejectReason::ForwardReference { premise: p });
        }
    }
    let c = |i: usize| &done[i].conclusion;
    Ok(match rule {
        Rule::Gen { generator, deleted } => {
            let g = gens.get(*generator).ok_or(RejectReason::NoSuchGenerator(*generator))?;
            let rest = g.delete_term(deleted).map_err(|_| RejectReason::NotInSupport(deleted.clone()))?;
            Pair::new(g.clone(), rest)?
        }
        Rule::Refl(f) => Pair::diagonal(f.clone()),
        Rule::Sym(i) => c(*i).swap(),
        Rule::Trans(i, j) => {
            if c(*i).right != c(*j).left {
                return Err(RejectReason::NotChained {
                    left: c(*i).right.to_string(),
                    right: c(*j).left.to_string(),
                });
            }
            Pair::new(c(*i).left.clone(), c(*j).right.clone())?
        }
        Rule::Add(i, j) => c(*i).add(c(*j))?,
        Rule::Mul(i, j) => c(*i).mul_componentwise(c(*j))?,
        Rule::Twist(i, beta) => c(*i).twisted_mul(beta)?,
    })
}

/// Replay every step; accept iff each conclusion is exactly the pair its
/// rule derives and the last conclusion is the goal.
pub fn verify_trace(trace: &DerivationTrace) -> Result<(), Rejection> {
    if trace.steps.is_empty() {
        return Err(Rejection { step: 0, reason: RejectReason::Empty });
    }
    for (i, step) in trace.steps.iter().enumerate() {
        let derived = derive(&trace.generators, &trace.steps[..i], &step.rule)
            .map_err(|reason| Rejection { step: i, reason })?;
        if derived != step.conclusion {
            return Err(Rejection {
                step: i,
                reason: RejectReason::ConclusionMismatch {
                    expected: derived.to_string(),
                    found: step.conclusion.to_string(),
                },
            });
        }
    }
    let last = trace.steps.len() - 1;
    let found = &trace.steps[last].conclusion;
    if *found != trace.goal {
        return Err(Rejection {
            step: last,
            reason: RejectReason::GoalMismatch { goal: trace.goal.to_string(), found: found.to_string() },
        });
    }
    Ok(())
}

/// Builds traces step by step, computing each conclusion from its rule.
#[derive(Debug, Clone)]
pub struct TraceBuilder {
    generators: Vec<Polynomial>,
    steps: Vec<DerivationStep>,
}

impl TraceBuilder {
    pub fn new(generators: Vec<Polynomial>) -> Self {
        TraceBuilder { generators, steps: Vec::new() }
    }

    pub fn push(&mut self, rule: Rule) -> Result<usize, RejectReason> {
        let conclusion = derive(&self.generators, &self.steps, &rule)?;
        self.steps.push(DerivationStep { rule, conclusion });
        Ok(self.steps.len() - 1)
    }

    pub fn gen(&mut self, generator: usize, deleted: Monomial) -> Result<usize, RejectReason> {
        self.push(Rule::Gen { generator, deleted })
    }

    pub fn refl(&mut self, f: Polynomial) -> Result<usize, RejectReason> {
        self.push(Rule::Refl(f))
    }

    pub fn sym(&mut self, i: usize) -> Result<usize, RejectReason> {
        self.push(Rule::Sym(i))
    }

    pub fn trans(&mut self, i: usize, j: usize) -> Result<usize, RejectReason> {
        self.push(Rule::Trans(i, j))
    }

    pub fn add(&mut self, i: usize, j: usize) -> Result<usize, RejectReason> {
        self.push(Rule::Add(i, j))
    }

    pub fn mul(&mut self, i: usize, j: usize) -> Result<usize, RejectReason> {
        self.push(Rule::Mul(i, j))
    }

    pub fn twist(&mut self, i: usize, beta: Pair) -> Result<usize, RejectReason> {
        self.push(Rule::Twist(i, beta))
    }

    pub fn conclusion(&self, i: usize) -> &Pair {
        &self.steps[i].conclusion
    }

    /// Finish with the last conclusion as the goal.
    pub fn finish(self) -> DerivationTrace {
        let goal = self.steps.last().map(|s| s.conclusion.clone()).expect("at least one step");
        DerivationTrace { generators: self.generators, steps: self.steps, goal }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("the four products a·m1, a·m2, b·m1 must have distinct monomials")]
    Collision,
    #[error("a and b must have distinct monomials")]
    SameMonomial,
    #[error(transparent)]
    Derivation(#[from] RejectReason),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Derivation of `(m1 + m2, m1)` from the two polynomials
/// `a·m1 + a·m2 + b·m1` and `a·m1 + b·m1`.
///
/// When the prime identifies the terms `a` and `b` and has `m1 ≥ m2`, both
/// generators attain their maximum twice, so they lie in `I‖(P)`; the trace
/// then shows that the pair `(m1 + m2, m1)` of `P` lies in `Bend(I‖(P))`.
/// Works in Laurent mode, where `a` is invertible.
pub fn prime_generator_trace(
    n: usize,
    m1: &Term,
    m2: &Term,
    a: &Term,
    b: &Term,
) -> Result<DerivationTrace, SchemaError> {
    let mode = Mode::Laurent;
    if a.mono == b.mono {
        return Err(SchemaError::SameMonomial);
    }
    let am1 = a.mul(m1);
    let am2 = a.mul(m2);
    let bm1 = b.mul(m1);
    if am1.mono == am2.mono || am1.mono == bm1.mono || am2.mono == bm1.mono {
        return Err(SchemaError::Collision);
    }
    let poly = |ts: &[&Term]| {
        Polynomial::from_terms(n, mode, ts.iter().map(|t| (t.mono.clone(), t.coef.clone().into())))
    };
    let g1 = poly(&[&am1, &am2, &bm1])?;
    let g2 = poly(&[&am1, &bm1])?;
    let mut tb = TraceBuilder::new(vec![g1, g2]);
    let s0 = tb.gen(0, bm1.mono.clone())?; // (G1, a·m1 + a·m2)
    let s1 = tb.sym(s0)?;
    let s2 = tb.gen(0, am2.mono.clone())?; // (G1, a·m1 + b·m1)
    let s3 = tb.trans(s1, s2)?;
    let s4 = tb.gen(1, bm1.mono.clone())?; // (G2, a·m1)
    let s5 = tb.trans(s3, s4)?; // (a·m1 + a·m2, a·m1)
    let s6 = tb.refl(poly(&[&a.inv()])?)?;
    tb.mul(s5, s6)?;
    Ok(tb.finish())
}

// JSON form.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepJson {
    pub rule: String,
    pub args: Vec<Value>,
    pub conclusion: [String; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<usize>,
    pub generators: Vec<String>,
    pub steps: Vec<StepJson>,
    pub goal: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceFormatError {
    #[error("invalid trace JSON: {0}")]
    Json(String),
    #[error("step {step}: {message}")]
    Step { step: usize, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn collect_strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|x| collect_strings(x, out)),
        _ => {}
    }
}

impl TraceJson {
    pub fn to_trace(&self) -> Result<DerivationTrace, TraceFormatError> {
        let mode = self.mode.unwrap_or(Mode::Laurent);
        let n = match self.variables {
            Some(n) => n,
            None => {
                let mut all: Vec<String> = self.generators.clone();
                all.extend(self.goal.iter().cloned());
                for s in &self.steps {
                    all.extend(s.conclusion.iter().cloned());
                    s.args.iter().for_each(|a| collect_strings(a, &mut all));
                }
                all.retain(|s| s.trim() != "1");
                text::infer_arity(&all)?
            }
        };
        let poly = |s: &str| text::parse_polynomial_n(s, n, mode);
        let pair = |p: &[String; 2]| -> Result<Pair, TraceFormatError> {
            Ok(Pair { left: poly(&p[0])?, right: poly(&p[1])? })
        };
        let generators = self.generators.iter().map(|s| poly(s)).collect::<Result<Vec<_>, _>>()?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            let bad = |m: &str| TraceFormatError::Step { step: i, message: m.to_string() };
            let idx = |k: usize| -> Result<usize, TraceFormatError> {
                s.args
                    .get(k)
                    .and_then(Value::as_u64)
                    .map(|v| v as usize)
                    .ok_or_else(|| bad(&format!("argument {k} must be a step index")))
            };
            let string = |k: usize| -> Result<&str, TraceFormatError> {
                s.args.get(k).and_then(Value::as_str).ok_or_else(|| bad(&format!("argument {k} must be a string")))
            };
            let arity = |k: usize| -> Result<(), TraceFormatError> {
                if s.args.len() != k {
                    return Err(bad(&format!("rule `{}` takes {k} arguments", s.rule)));
                }
                Ok(())
            };
            let rule = match s.rule.as_str() {
                "gen" => {
                    arity(2)?;
                    Rule::Gen { generator: idx(0)?, deleted: text::parse_monomial_n(string(1)?, n, mode)? }
                }
                "refl" => {
                    arity(1)?;
                    Rule::Refl(poly(string(0)?)?)
                }
                "sym" => {
                    arity(1)?;
                    Rule::Sym(idx(0)?)
                }
                "trans" => {
                    arity(2)?;
                    Rule::Trans(idx(0)?, idx(1)?)
                }
                "add" => {
                    arity(2)?;
                    Rule::Add(idx(0)?, idx(1)?)
                }
                "mul" => {
                    arity(2)?;
                    Rule::Mul(idx(0)?, idx(1)?)
                }
                "twist" => {
                    arity(2)?;
                    let beta: [String; 2] = serde_json::from_value(s.args[1].clone())
                        .map_err(|_| bad("argument 1 must be a pair of polynomials"))?;
                    Rule::Twist(idx(0)?, pair(&beta)?)
                }
                other => return Err(bad(&format!("unknown rule `{other}`"))),
            };
            steps.push(DerivationStep { rule, conclusion: pair(&s.conclusion)? });
        }
        Ok(DerivationTrace { generators, steps, goal: pair(&self.goal)? })
    }

    pub fn from_trace(trace: &DerivationTrace) -> TraceJson {
        let pair = |p: &Pair| [p.left.to_string(), p.right.to_string()];
        let steps = trace
            .steps
            .iter()
            .map(|s| {
                let args = match &s.rule {
                    Rule::Gen { generator, deleted } => {
                        vec![Value::from(*generator), Value::from(deleted.to_string())]
                    }
                    Rule::Refl(f) => vec![Value::from(f.to_string())],
                    Rule::Sym(i) => vec![Value::from(*i)],
                    Rule::Trans(i, j) | Rule::Add(i, j) | Rule::Mul(i, j) => {
                        vec![Value::from(*i), Value::from(*j)]
                    }
                    Rule::Twist(i, beta) => {
                        vec![Value::from(*i), Value::from(pair(beta).to_vec())]
                    }
                };
                StepJson { rule: s.rule.name().to_string(), args, conclusion: pair(&s.conclusion) }
            })
            .collect();
        let n = trace.goal.arity();
        let mode = trace.goal.mode();
        TraceJson {
            mode: Some(mode),
            variables: Some(n),
            generators: trace.generators.iter().map(|g| g.to_string()).collect(),
            steps,
            goal: pair(&trace.goal),
        }
    }
}

pub fn parse_trace_json(json: &str) -> Result<DerivationTrace, TraceFormatError> {
    let raw: TraceJson = serde_json::from_str(json).map_err(|e| TraceFormatError::Json(e.to_string()))?;
    raw.to_trace()
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{i:>3}  {:<6} {}", s.rule.name(), s.conclusion)?;
        }
        write!(f, "goal {}", self.goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::text::parse_polynomials;

    fn polys(texts: &[&str], n: usize) -> Vec<Polynomial> {
        parse_polynomials(texts, Some(n), Mode::Laurent).unwrap()
    }

    fn mono(e: &[i64]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn bend_generators_with_provenance() {
        assert_eq!(instantiate_bend_generators(&polys(&["x + y", "x + z"], 3)).len(), 4);
        let gens = polys(&["x + 0", "x*y + 0"], 2);
        let bends = instantiate_bend_generators(&gens);
        let pairs: Vec<(String, String)> =
            bends.iter().map(|b| (b.pair.left.to_string(), b.pair.right.to_string())).collect();
        for expected in [("x + 0", "x"), ("x + 0", "0"), ("x*y + 0", "x*y"), ("x*y + 0", "0")] {
            assert!(pairs.contains(&(expected.0.to_string(), expected.1.to_string())));
        }
        assert_eq!(bends[2].generator, 1);
        assert!(instantiate_bend_generators(&[]).is_empty());
    }

    #[test]
    fn x_and_xy_from_two_binomials() {
        let gens = polys(&["x + 0", "x*y + 0"], 2);
        let mut tb = TraceBuilder::new(gens);
        let a = tb.gen(0, mono(&[0, 0])).unwrap(); // (x + 0, x)
        let b = tb.gen(1, mono(&[0, 0])).unwrap(); // (x*y + 0, x*y)
        let a_sym = tb.sym(a).unwrap(); // (x, x + 0)
        let c = tb.gen(0, mono(&[1, 0])).unwrap(); // (x + 0, 0)
        let d = tb.gen(1, mono(&[1, 1])).unwrap(); // (x*y + 0, 0)
        let d_sym = tb.sym(d).unwrap(); // (0, x*y + 0)
        let e = tb.trans(c, d_sym).unwrap(); // (x + 0, x*y + 0)
        let f = tb.trans(a_sym, e).unwrap(); // (x, x*y + 0)
        let g = tb.trans(f, b).unwrap(); // (x, x*y)
        let trace = tb.finish();
        assert_eq!(trace.steps[g].conclusion.to_string(), "(x, x*y)");
        assert_eq!(verify_trace(&trace), Ok(()));
    }

    #[test]
    fn rejects_unchained_transitivity() {
        let gens = polys(&["x + y", "x + z"], 3);
        let mut tb = TraceBuilder::new(gens.clone());
        tb.gen(0, mono(&[1, 0, 0])).unwrap(); // (x + y, y)
        tb.gen(1, mono(&[1, 0, 0])).unwrap(); // (x + z, z)
        let mut trace = tb.finish();
        let bogus = Pair::new(gens[0].clone(), gens[1].delete_term(&mono(&[1, 0, 0])).unwrap()).unwrap();
        trace.steps.push(DerivationStep { rule: Rule::Trans(0, 1), conclusion: bogus.clone() });
        trace.goal = bogus;
        let err = verify_trace(&trace).unwrap_err();
        assert_eq!(err.step, 2);
        assert!(matches!(err.reason, RejectReason::NotChained { .. }));
    }

    #[test]
    fn rejects_forward_references_and_goal_mismatch() {
        let gens = polys(&["x + y"], 2);
        let mut tb = TraceBuilder::new(gens);
        tb.gen(0, mono(&[1, 0])).unwrap();
        let mut trace = tb.finish();
        let c = trace.steps[0].conclusion.clone();
        trace.steps.push(DerivationStep { rule: Rule::Sym(1), conclusion: c.swap() });
        assert_eq!(verify_trace(&trace).unwrap_err().step, 1);
        trace.steps.pop();
        trace.goal = c.swap();
        assert!(matches!(verify_trace(&trace).unwrap_err().reason, RejectReason::GoalMismatch { .. }));
        trace.steps.clear();
        assert_eq!(verify_trace(&trace).unwrap_err().reason, RejectReason::Empty);
    }

    #[test]
    fn prime_schema_trace_verifies() {
        let t = |c: i64, e: &[i64]| Term::new(int(c), mono(e));
        let trace = prime_generator_trace(2, &t(0, &[1, 0]), &t(0, &[0, 0]), &t(0, &[0, 1]), &t(0, &[1, 0])).unwrap();
        assert_eq!(verify_trace(&trace), Ok(()));
        assert_eq!(trace.goal.to_string(), "(x + 0, x)");
        assert_eq!(
            prime_generator_trace(2, &t(0, &[1, 0]), &t(0, &[0, 0]), &t(0, &[1, 0]), &t(3, &[1, 0])),
            Err(SchemaError::SameMonomial)
        );
    }

    #[test]
    fn json_round_trip() {
        let gens = polys(&["x + y", "x + z"], 3);
        let mut tb = TraceBuilder::new(gens);
        let a = tb.gen(0, mono(&[1, 0, 0])).unwrap();
        tb.twist(a, Pair::new(polys(&["x"], 3)[0].clone(), polys(&["y"], 3)[0].clone()).unwrap()).unwrap();
        let trace = tb.finish();
        let json = serde_json::to_string(&TraceJson::from_trace(&trace)).unwrap();
        assert_eq!(parse_trace_json(&json).unwrap(), trace);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(parse_trace_json("{"), Err(TraceFormatError::Json(_))));
        let bad_rule = r#"{"generators":["x + y"],"steps":[{"rule":"cut","args":[],"conclusion":["x","x"]}],"goal":["x","x"]}"#;
        assert!(matches!(parse_trace_json(bad_rule), Err(TraceFormatError::Step { step: 0, .. })));
    }
}
