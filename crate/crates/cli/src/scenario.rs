//! Line-oriented scenario files: one scenario per file, `#` comments,
//! a space declaration followed by nets, elements, a convergence, a mode,
//! and mode-specific parameters. Parsing is strict: unknown keys, missing
//! required fields, or ill-typed values fail with the offending line.

use std::fmt;

use roughlat_core::conv::{
    conv_verify, ConvergenceStructure, ConvName, OrderConvWitness, Verdict, WitnessEvidence,
};
use roughlat_core::exact::{parse_rational, RationalFunction};
use roughlat_core::lattice::{self, parse_elem, Elem, Space};
use roughlat_core::net::{self, NetSpec};
use roughlat_core::oracle::{brute_limit_set, brute_membership, BruteVerdict, GridSpec};
use roughlat_core::rough::{
    cert_abs, cert_interleave, cert_join_const, cert_meet_const, cert_neg, cert_pos,
    cert_subseq, cert_sum, decide_rc, limit_set, verify_rc, RcCertificate,
};

use crate::expr::{parse_formula, split_tuple};

/// What the parser refused: grammar (`Syntax`) or meaning (`Semantic`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug)]
pub struct ScenarioError {
    pub line: usize,
    pub kind: ErrorKind,
    pub msg: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        };
        write!(f, "{} at line {}: {}", kind, self.line, self.msg)
    }
}

impl std::error::Error for ScenarioError {}

fn syntax(line: usize, msg: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        kind: ErrorKind::Syntax,
        msg: msg.into(),
    }
}

fn semantic(line: usize, msg: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        kind: ErrorKind::Semantic,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Verify,
    Decide,
    LimitSet,
    Oracle,
    Transform(String),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Verify => write!(f, "verify"),
            Mode::Decide => write!(f, "decide"),
            Mode::LimitSet => write!(f, "limitset"),
            Mode::Oracle => write!(f, "oracle"),
            Mode::Transform(name) => write!(f, "transform:{}", name),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub space: Space,
    pub net: NetSpec,
    pub conv: Option<ConvName>,
    pub mode: Mode,
    pub x: Option<Elem>,
    pub r: Option<Elem>,
    pub x2: Option<Elem>,
    pub r2: Option<Elem>,
    pub y: Option<Elem>,
    pub witness: Option<NetSpec>,
    pub witness2: Option<NetSpec>,
    pub net2: Option<NetSpec>,
    pub dominating: Option<NetSpec>,
    pub formula: Option<RationalFunction>,
    pub grid: Option<GridSpec>,
    pub horizon: Option<u64>,
    pub stride: Option<u64>,
    pub offset: Option<u64>,
    pub n0: Option<u64>,
    pub mask: Option<Vec<bool>>,
    pub expect: Option<String>,
}

/// Splits `[a, b, c]` at top-level commas.
fn split_list(s: &str) -> Result<Vec<&str>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, found `{}`", s))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth = depth.checked_sub(1).ok_or("unbalanced brackets")?,
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(inner[start..].trim());
    Ok(parts)
}

fn parse_elem_list(space: Space, s: &str) -> Result<Vec<Elem>, String> {
    split_list(s)?
        .into_iter()
        .map(|p| parse_elem(space, p).map_err(|e| e.to_string()))
        .collect()
}

fn parse_formula_tuple(space: Space, s: &str) -> Result<Vec<RationalFunction>, String> {
    let parts = split_tuple(s)?;
    let want = match space {
        Space::QVec(d) => d,
        Space::Lex => 2,
        Space::PwLin => return Err("term formulas need a coordinate space".into()),
    };
    if parts.len() != want {
        return Err(format!(
            "expected {} coordinate formulas, found {}",
            want,
            parts.len()
        ));
    }
    parts.into_iter().map(parse_formula).collect()
}

/// Parses a net declaration (the text after the `net` keyword).
fn parse_net_decl(space: Space, decl: &str) -> Result<NetSpec, String> {
    let decl = decl.trim();
    let (head, rest) = decl
        .split_once(char::is_whitespace)
        .map(|(h, r)| (h, r.trim()))
        .unwrap_or((decl, ""));
    match head {
        "periodic" => {
            let mut prefix = Vec::new();
            let mut cycle = None;
            for field in split_fields(rest)? {
                match field {
                    ("prefix", v) => prefix = parse_elem_list(space, v)?,
                    ("cycle", v) => cycle = Some(parse_elem_list(space, v)?),
                    (k, _) => return Err(format!("unknown periodic field `{}`", k)),
                }
            }
            let cycle = cycle.ok_or("periodic net needs `cycle=[...]`")?;
            NetSpec::eventually_periodic(space, prefix, cycle).map_err(|e| e.to_string())
        }
        "periodic+rational" => {
            let mut prefix = Vec::new();
            let mut cycle = None;
            let mut decay = None;
            for field in split_fields(rest)? {
                match field {
                    ("prefix", v) => prefix = parse_elem_list(space, v)?,
                    ("cycle", v) => cycle = Some(parse_elem_list(space, v)?),
                    ("decay", v) => decay = Some(parse_formula_tuple(space, v)?),
                    (k, _) => return Err(format!("unknown periodic+rational field `{}`", k)),
                }
            }
            let cycle = cycle.ok_or("periodic+rational net needs `cycle=[...]`")?;
            let decay = decay.ok_or("periodic+rational net needs `decay=(...)`")?;
            NetSpec::periodic_plus_rational_with_prefix(space, prefix, cycle, decay)
                .map_err(|e| e.to_string())
        }
        "rational" => {
            let mut prefix = Vec::new();
            let mut rest = rest;
            if let Some(stripped) = rest.strip_prefix("prefix=") {
                let end = stripped
                    .find(']')
                    .ok_or("unterminated prefix list")?;
                prefix = parse_elem_list(space, &stripped[..=end])?;
                rest = stripped[end + 1..].trim();
            }
            let coords = parse_formula_tuple(space, rest)?;
            NetSpec::rational_term_with_prefix(space, prefix, coords).map_err(|e| e.to_string())
        }
        "constant" => {
            let v = parse_elem(space, rest).map_err(|e| e.to_string())?;
            Ok(NetSpec::constant(v))
        }
        "list" => {
            let terms = parse_elem_list(space, rest)?;
            NetSpec::finite(space, terms).map_err(|e| e.to_string())
        }
        "tail" => {
            let (num, inner) = rest
                .split_once(" of ")
                .ok_or("expected `tail <n0> of <net>`")?;
            let n0: u64 = num.trim().parse().map_err(|_| "bad tail index")?;
            let base = parse_net_decl(space, inner)?;
            net::tail(&base, n0).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown net kind `{}`", other)),
    }
}

/// Splits `key=value key=value` where values are balanced bracketed or
/// parenthesized groups.
fn split_fields(s: &str) -> Result<Vec<(&str, &str)>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or(format!("expected `key=value` in `{}`", rest))?;
        let key = rest[..eq].trim();
        let after = &rest[eq + 1..];
        let close = match after.chars().next() {
            Some(open @ ('[' | '(')) => {
                let shut = if open == '[' { ']' } else { ')' };
                let mut depth = 0usize;
                let mut end = None;
                for (i, c) in after.char_indices() {
                    if c == open {
                        depth += 1;
                    } else if c == shut {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(i + 1);
                            break;
                        }
                    }
                }
                end
            }
            _ => after.find(char::is_whitespace).or(Some(after.len())),
        }
        .ok_or("unterminated value group")?;
        out.push((key, after[..close].trim()));
        rest = after[close..].trim_start();
    }
    Ok(out)
}

fn parse_grid(space: Space, s: &str) -> Result<GridSpec, String> {
    // [-1,3]x[-1,3] step 1/4
    let (ranges_part, step_part) = s
        .split_once("step")
        .ok_or("expected `grid [lo,hi]x... step p/q`")?;
    let step = parse_rational(step_part.trim()).map_err(|e| e.to_string())?;
    let mut ranges = Vec::new();
    for range in ranges_part.trim().split('x') {
        let parts = split_list(range.trim())?;
        if parts.len() != 2 {
            return Err("each grid range needs exactly `[lo, hi]`".into());
        }
        ranges.push((
            parse_rational(parts[0]).map_err(|e| e.to_string())?,
            parse_rational(parts[1]).map_err(|e| e.to_string())?,
        ));
    }
    let want = match space {
        Space::QVec(d) => d,
        _ => return Err("grids live on the coordinatewise space".into()),
    };
    if ranges.len() != want {
        return Err(format!("expected {} grid ranges, found {}", want, ranges.len()));
    }
    GridSpec::new(ranges, step).map_err(|e| e.to_string())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut space: Option<(usize, Space)> = None;
    let mut net: Option<NetSpec> = None;
    let mut conv = None;
    let mut mode: Option<(usize, Mode)> = None;
    let mut x = None;
    let mut r = None;
    let mut x2 = None;
    let mut r2 = None;
    let mut y = None;
    let mut witness = None;
    let mut witness2 = None;
    let mut net2 = None;
    let mut dominating = None;
    let mut formula = None;
    let mut grid = None;
    let mut horizon = None;
    let mut stride = None;
    let mut offset = None;
    let mut n0 = None;
    let mut mask: Option<Vec<bool>> = None;
    let mut expect = None;
    let mut saw_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        saw_content = true;
        let (key, value) = line
            .split_once(char::is_whitespace)
            .map(|(k, v)| (k, v.trim()))
            .unwrap_or((line, ""));
        let need_space = |space: &Option<(usize, Space)>| -> Result<Space, ScenarioError> {
            space
                .as_ref()
                .map(|(_, s)| *s)
                .ok_or_else(|| semantic(lineno, "declare `space` before this line"))
        };
        match key {
            "space" => {
                let s = match value.split_whitespace().collect::<Vec<_>>().as_slice() {
                    ["qvec", d] => {
                        let dim: usize = d
                            .parse()
                            .map_err(|_| syntax(lineno, "bad qvec dimension"))?;
                        if dim == 0 {
                            return Err(semantic(lineno, "qvec dimension must be positive"));
                        }
                        Space::QVec(dim)
                    }
                    ["lex"] => Space::Lex,
                    ["pwlin"] => Space::PwLin,
                    _ => return Err(syntax(lineno, "expected `space qvec <d> | lex | pwlin`")),
                };
                space = Some((lineno, s));
            }
            "net" => {
                let s = need_space(&space)?;
                net = Some(parse_net_decl(s, value).map_err(|m| semantic(lineno, m))?);
            }
            "net2" => {
                let s = need_space(&space)?;
                net2 = Some(parse_net_decl(s, value).map_err(|m| semantic(lineno, m))?);
            }
            "witness" | "witness2" | "dominating" => {
                let s = need_space(&space)?;
                let decl = value
                    .strip_prefix("net")
                    .map(str::trim)
                    .ok_or_else(|| syntax(lineno, format!("expected `{} net <decl>`", key)))?;
                let parsed = parse_net_decl(s, decl).map_err(|m| semantic(lineno, m))?;
                match key {
                    "witness" => witness = Some(parsed),
                    "witness2" => witness2 = Some(parsed),
                    _ => dominating = Some(parsed),
                }
            }
            "conv" => {
                conv = Some(match value {
                    "order" => ConvName::OrderConv,
                    "monotone" => ConvName::MonotoneDecreasingConv,
                    "pwlin-norm" => ConvName::PwLinNormConv,
                    other => {
                        return Err(syntax(
                            lineno,
                            format!("unknown convergence `{}`", other),
                        ))
                    }
                });
            }
            "mode" => {
                let m = match value {
                    "verify" => Mode::Verify,
                    "decide" => Mode::Decide,
                    "limitset" => Mode::LimitSet,
                    "oracle" => Mode::Oracle,
                    other => match other.strip_prefix("transform:") {
                        Some(name) if !name.is_empty() => Mode::Transform(name.to_string()),
                        _ => return Err(syntax(lineno, format!("unknown mode `{}`", other))),
                    },
                };
                mode = Some((lineno, m));
            }
            "x" | "x2" | "y" => {
                let s = need_space(&space)?;
                let e = parse_elem(s, value).map_err(|e| semantic(lineno, e.to_string()))?;
                match key {
                    "x" => x = Some(e),
                    "x2" => x2 = Some(e),
                    _ => y = Some(e),
                }
            }
            "r" | "r2" => {
                let s = need_space(&space)?;
                let e = parse_elem(s, value).map_err(|e| semantic(lineno, e.to_string()))?;
                let theta = Elem::zero(s);
                if !lattice::leq(&theta, &e).map_err(|e| semantic(lineno, e.to_string()))? {
                    return Err(semantic(lineno, "roughness must be ≥ θ"));
                }
                if key == "r" {
                    r = Some(e);
                } else {
                    r2 = Some(e);
                }
            }
            "formula" => {
                formula = Some(parse_formula(value).map_err(|m| semantic(lineno, m))?);
            }
            "grid" => {
                let s = need_space(&space)?;
                grid = Some(parse_grid(s, value).map_err(|m| semantic(lineno, m))?);
            }
            "horizon" | "stride" | "offset" | "n0" => {
                let v: u64 = value
                    .parse()
                    .map_err(|_| syntax(lineno, format!("bad integer for `{}`", key)))?;
                match key {
                    "horizon" => horizon = Some(v),
                    "stride" => stride = Some(v),
                    "offset" => offset = Some(v),
                    _ => n0 = Some(v),
                }
            }
            "mask" => {
                let bits = split_list(value).map_err(|m| syntax(lineno, m))?;
                let parsed: Result<Vec<bool>, ScenarioError> = bits
                    .into_iter()
                    .map(|b| match b {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        other => Err(syntax(lineno, format!("mask entries are 0/1, found `{}`", other))),
                    })
                    .collect();
                mask = Some(parsed?);
            }
            "expect" => {
                expect = Some(value.to_string());
            }
            other => {
                return Err(syntax(lineno, format!("unknown directive `{}`", other)));
            }
        }
    }

    if !saw_content {
        return Err(syntax(1, "empty scenario"));
    }
    let (_, space) = space.ok_or_else(|| semantic(1, "missing `space` declaration"))?;
    let net = net.ok_or_else(|| semantic(1, "missing `net` declaration"))?;
    let (mode_line, mode) = mode.ok_or_else(|| semantic(1, "missing `mode` declaration"))?;

    let missing = |field: &str| semantic(mode_line, format!("mode `{}` needs `{}`", mode, field));
    match &mode {
        Mode::Verify => {
            if x.is_none() {
                return Err(missing("x"));
            }
            if r.is_none() {
                return Err(missing("r"));
            }
            if witness.is_none() {
                return Err(missing("witness"));
            }
        }
        Mode::Decide => {
            if x.is_none() {
                return Err(missing("x"));
            }
            if r.is_none() {
                return Err(missing("r"));
            }
        }
        Mode::LimitSet => {
            if r.is_none() {
                return Err(missing("r"));
            }
        }
        Mode::Oracle => {
            if r.is_none() {
                return Err(missing("r"));
            }
            if horizon.is_none() {
                return Err(missing("horizon"));
            }
            if grid.is_none() && x.is_none() {
                return Err(missing("x (or a grid)"));
            }
        }
        Mode::Transform(name) => {
            if x.is_none() {
                return Err(missing("x"));
            }
            if r.is_none() {
                return Err(missing("r"));
            }
            if witness.is_none() {
                return Err(missing("witness"));
            }
            match name.as_str() {
                "abs" | "pos" | "neg" => {}
                "join-const" | "meet-const" => {
                    if y.is_none() {
                        return Err(missing("y"));
                    }
                }
                "tail" => {
                    if n0.is_none() {
                        return Err(missing("n0"));
                    }
                }
                "subseq" => {
                    if stride.is_none() {
                        return Err(missing("stride"));
                    }
                }
                "sum" | "interleave" => {
                    if net2.is_none() || witness2.is_none() || x2.is_none() || r2.is_none() {
                        return Err(missing("net2, witness2, x2, r2"));
                    }
                    if name == "interleave" && mask.is_none() {
                        return Err(missing("mask"));
                    }
                }
                other => {
                    return Err(semantic(
                        mode_line,
                        format!("unknown transform `{}`", other),
                    ))
                }
            }
        }
    }

    Ok(Scenario {
        space,
        net,
        conv,
        mode,
        x,
        r,
        x2,
        r2,
        y,
        witness,
        witness2,
        net2,
        dominating,
        formula,
        grid,
        horizon,
        stride,
        offset,
        n0,
        mask,
        expect,
    })
}

impl Scenario {
    fn conv_structure(&self) -> Result<ConvergenceStructure, String> {
        let name = self.conv.unwrap_or(ConvName::OrderConv);
        match name {
            ConvName::OrderConv => ConvergenceStructure::order(self.space),
            ConvName::MonotoneDecreasingConv => {
                ConvergenceStructure::monotone_decreasing(self.space)
            }
            ConvName::PwLinNormConv => {
                if self.space != Space::PwLin {
                    return Err("pwlin-norm convergence needs the pwlin space".into());
                }
                Ok(ConvergenceStructure::pwlin_norm())
            }
        }
        .map_err(|e| e.to_string())
    }

    fn evidence(&self) -> WitnessEvidence {
        if let Some(d) = &self.dominating {
            WitnessEvidence::Order(OrderConvWitness {
                dominating: d.clone(),
            })
        } else if let Some(f) = &self.formula {
            WitnessEvidence::NormFormula { formula: f.clone() }
        } else {
            WitnessEvidence::Direct
        }
    }

    fn certificate(
        &self,
        witness: &NetSpec,
        x: &Elem,
        r: &Elem,
    ) -> Result<RcCertificate, String> {
        RcCertificate::new(
            witness.clone(),
            self.evidence(),
            r.clone(),
            x.clone(),
            self.conv_structure()?,
        )
        .map_err(|e| e.to_string())
    }
}

/// The outcome of running one scenario.
#[derive(Clone, Debug)]
pub struct RunReport {
    /// The verdict line the scenario printed.
    pub output: String,
    /// Whether the output matched the scenario's expectation, if any.
    pub matches: Option<bool>,
}

pub fn run_scenario(s: &Scenario) -> Result<RunReport, String> {
    let output = match &s.mode {
        Mode::Verify => {
            let cert = s.certificate(
                s.witness.as_ref().unwrap(),
                s.x.as_ref().unwrap(),
                s.r.as_ref().unwrap(),
            )?;
            verify_rc(&s.net, &cert).map_err(|e| e.to_string())?.to_string()
        }
        Mode::Decide => {
            // the class decision is grounded in order convergence
            match s.conv.unwrap_or(ConvName::OrderConv) {
                ConvName::OrderConv => decide_rc(&s.net, s.x.as_ref().unwrap(), s.r.as_ref().unwrap())
                    .map_err(|e| e.to_string())?
                    .to_string(),
                other => {
                    return Err(format!(
                        "mode decide applies to order convergence, not `{}`",
                        other
                    ))
                }
            }
        }
        Mode::LimitSet => {
            let ls = limit_set(&s.net, s.r.as_ref().unwrap()).map_err(|e| e.to_string())?;
            match ls.interval.bounds() {
                Some((lo, hi)) => {
                    let d = ls.interval.diameter().map_err(|e| e.to_string())?;
                    format!("box [{}, {}] diameter {}", lo, hi, d)
                }
                None => "box empty".to_string(),
            }
        }
        Mode::Oracle => {
            let horizon = s.horizon.unwrap();
            match &s.grid {
                Some(grid) => {
                    let pts = brute_limit_set(&s.net, s.r.as_ref().unwrap(), grid, horizon)
                        .map_err(|e| e.to_string())?;
                    format!("points {}", pts.len())
                }
                None => {
                    let v = brute_membership(
                        &s.net,
                        s.x.as_ref().unwrap(),
                        s.r.as_ref().unwrap(),
                        horizon,
                    )
                    .map_err(|e| e.to_string())?;
                    match v {
                        BruteVerdict::True => "true".into(),
                        BruteVerdict::False => "false".into(),
                        BruteVerdict::Inconclusive => "inconclusive".into(),
                    }
                }
            }
        }
        Mode::Transform(name) => run_transform(s, name)?,
    };
    let matches = s.expect.as_ref().map(|e| e == &output);
    Ok(RunReport { output, matches })
}

fn run_transform(s: &Scenario, name: &str) -> Result<String, String> {
    let x = s.x.as_ref().unwrap();
    let r = s.r.as_ref().unwrap();
    let cert = s.certificate(s.witness.as_ref().unwrap(), x, r)?;
    let theta = Elem::zero(s.space);
    let err = |e: roughlat_core::Error| e.to_string();
    let (target_net, new_cert) = match name {
        "abs" => (net::net_abs(&s.net).map_err(err)?, cert_abs(&cert).map_err(err)?),
        "pos" => (
            net::net_join(&s.net, &NetSpec::constant(theta.clone())).map_err(err)?,
            cert_pos(&cert).map_err(err)?,
        ),
        "neg" => (
            net::net_join(&net::net_neg(&s.net).map_err(err)?, &NetSpec::constant(theta)).map_err(err)?,
            cert_neg(&cert).map_err(err)?,
        ),
        "join-const" => {
            let y = s.y.as_ref().unwrap();
            (
                net::net_join(&s.net, &NetSpec::constant(y.clone())).map_err(err)?,
                cert_join_const(&cert, y).map_err(err)?,
            )
        }
        "meet-const" => {
            let y = s.y.as_ref().unwrap();
            (
                net::net_meet(&s.net, &NetSpec::constant(y.clone())).map_err(err)?,
                cert_meet_const(&cert, y).map_err(err)?,
            )
        }
        "tail" => {
            let n0 = s.n0.unwrap();
            (
                net::tail(&s.net, n0).map_err(err)?,
                cert_subseq(&cert, 1, n0.saturating_sub(1)).map_err(err)?,
            )
        }
        "subseq" => {
            let stride = s.stride.unwrap();
            let offset = s.offset.unwrap_or(0);
            (
                net::subseq_arith(&s.net, stride, offset).map_err(err)?,
                cert_subseq(&cert, stride, offset).map_err(err)?,
            )
        }
        "sum" => {
            let cert2 = s.certificate(
                s.witness2.as_ref().unwrap(),
                s.x2.as_ref().unwrap(),
                s.r2.as_ref().unwrap(),
            )?;
            (
                net::net_product_sum(&s.net, s.net2.as_ref().unwrap()).map_err(err)?,
                cert_sum(&cert, &cert2).map_err(err)?,
            )
        }
        "interleave" => {
            let cert2 = s.certificate(
                s.witness2.as_ref().unwrap(),
                s.x2.as_ref().unwrap(),
                s.r2.as_ref().unwrap(),
            )?;
            let mask = s.mask.as_ref().unwrap();
            (
                net::interleave(&s.net, s.net2.as_ref().unwrap(), mask).map_err(err)?,
                cert_interleave(&cert, &cert2, mask).map_err(err)?,
            )
        }
        other => return Err(format!("unknown transform `{}`", other)),
    };
    Ok(verify_rc(&target_net, &new_cert)
        .map_err(err)?
        .to_string())
}

/// Convergence verification at the structure level (used by the bundled
/// reproductions for the monotone rejection).
pub fn run_conv_verify(
    space: Space,
    conv: ConvName,
    net: &NetSpec,
    x: &Elem,
    w: Option<&OrderConvWitness>,
) -> Result<Verdict, String> {
    let c = match conv {
        ConvName::OrderConv => ConvergenceStructure::order(space),
        ConvName::MonotoneDecreasingConv => ConvergenceStructure::monotone_decreasing(space),
        ConvName::PwLinNormConv => Ok(ConvergenceStructure::pwlin_norm()),
    }
    .map_err(|e| e.to_string())?;
    conv_verify(&c, net, x, w).map_err(|e| e.to_string())
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space {}", self.space)?;
        writeln!(f, "net {}", self.net)?;
        if let Some(c) = &self.conv {
            writeln!(f, "conv {}", c)?;
        }
        writeln!(f, "mode {}", self.mode)?;
        if let Some(e) = &self.x {
            writeln!(f, "x {}", e)?;
        }
        if let Some(e) = &self.r {
            writeln!(f, "r {}", e)?;
        }
        if let Some(e) = &self.x2 {
            writeln!(f, "x2 {}", e)?;
        }
        if let Some(e) = &self.r2 {
            writeln!(f, "r2 {}", e)?;
        }
        if let Some(e) = &self.y {
            writeln!(f, "y {}", e)?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness net {}", w)?;
        }
        if let Some(w) = &self.witness2 {
            writeln!(f, "witness2 net {}", w)?;
        }
        if let Some(n) = &self.net2 {
            writeln!(f, "net2 {}", n)?;
        }
        if let Some(d) = &self.dominating {
            writeln!(f, "dominating net {}", d)?;
        }
        if let Some(g) = &self.formula {
            writeln!(f, "formula {}", g)?;
        }
        if let Some(g) = &self.grid {
            let ranges: Vec<String> = g
                .ranges()
                .iter()
                .map(|(lo, hi)| format!("[{}, {}]", lo, hi))
                .collect();
            writeln!(f, "grid {} step {}", ranges.join("x"), g.step())?;
        }
        if let Some(v) = self.horizon {
            writeln!(f, "horizon {}", v)?;
        }
        if let Some(v) = self.stride {
            writeln!(f, "stride {}", v)?;
        }
        if let Some(v) = self.offset {
            writeln!(f, "offset {}", v)?;
        }
        if let Some(v) = self.n0 {
            writeln!(f, "n0 {}", v)?;
        }
        if let Some(m) = &self.mask {
            let bits: Vec<&str> = m.iter().map(|b| if *b { "1" } else { "0" }).collect();
            writeln!(f, "mask [{}]", bits.join(","))?;
        }
        if let Some(e) = &self.expect {
            writeln!(f, "expect {}", e)?;
        }
        Ok(())
    }
}
