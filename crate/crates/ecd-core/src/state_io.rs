//! Line-oriented state files for geometry and field configurations.
//!
//! Grammar (one record per line, `#` starts a comment, blanks ignored):
//!
//! ```text
//! sig   P Q                      # required, P + Q = 4
//! e     A MU COEFF E0 E1 E2 E3   # vielbein monomial, default identity
//! omega I MU COEFF E0 E1 E2 E3   # spin connection monomial
//! psi   ALPHA re COEFF E0..E3    # spinor component monomial, real part
//! psi   ALPHA im COEFF E0..E3    # ... imaginary part
//! mass  COEFF                    # Dirac mass
//! point X0 X1 X2 X3              # sample point, validated on load
//! ```
//!
//! Coefficients and coordinates are rationals like `5` or `-3/4`; exponents
//! are small nonneg integers. With no `e` records at all the vielbein is the
//! identity; once one appears the matrix starts from zero and every nonzero
//! entry must be listed. A file containing any `psi` or `mass` record loads
//! as a field state, otherwise as bare geometry. Serialization is canonical
//! (records sorted, zero coefficients dropped), so `serialize(load(f))`
//! equals `normalize(f)` textually.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num::Zero;
use thiserror::Error;

use crate::algebra::Signature;
use crate::exterior::Poly;
use crate::fieldeq::FieldState;
use crate::geometry::GeometryState;
use crate::scalar::{cq, CQ, Q};

#[derive(Debug, Error)]
pub enum StateIoError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("vielbein is singular at registered point ({point})")]
    SingularPoint { point: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub enum LoadedState {
    Geometry(GeometryState),
    Field(FieldState),
}

impl LoadedState {
    pub fn geometry(&self) -> &GeometryState {
        match self {
            LoadedState::Geometry(g) => g,
            LoadedState::Field(f) => &f.geom,
        }
    }

    pub fn field(&self) -> Option<&FieldState> {
        match self {
            LoadedState::Geometry(_) => None,
            LoadedState::Field(f) => Some(f),
        }
    }
}

fn parse_q(tok: &str) -> Result<Q, String> {
    Q::from_str(tok).map_err(|_| format!("bad rational `{}`", tok))
}

fn parse_idx(tok: &str, bound: usize, what: &str) -> Result<usize, String> {
    let v: usize = tok.parse().map_err(|_| format!("bad {} index `{}`", what, tok))?;
    if v >= bound {
        return Err(format!("{} index {} out of range (< {})", what, v, bound));
    }
    Ok(v)
}

fn parse_expo(toks: &[&str]) -> Result<Vec<u16>, String> {
    if toks.len() != 4 {
        return Err(format!("expected 4 exponents, got {}", toks.len()));
    }
    toks.iter()
        .map(|t| t.parse::<u16>().map_err(|_| format!("bad exponent `{}`", t)))
        .collect()
}

pub fn parse_state(text: &str, path: &str) -> Result<LoadedState, StateIoError> {
    let err = |line: usize, msg: String| StateIoError::Parse {
        path: path.to_string(),
        line,
        msg,
    };
    let mut sig: Option<Signature> = None;
    let mut e: Option<Vec<Vec<Poly<Q>>>> = None;
    let mut omega = vec![vec![Poly::<Q>::zero(4); 4]; 6];
    let mut psi: Option<Vec<Poly<CQ>>> = None;
    let mut mass: Option<Q> = None;
    let mut points: Vec<Vec<Q>> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "sig" => {
                if toks.len() != 3 {
                    return Err(err(line, "sig takes two integers".into()));
                }
                let p: usize =
                    toks[1].parse().map_err(|_| err(line, format!("bad integer `{}`", toks[1])))?;
                let qq: usize =
                    toks[2].parse().map_err(|_| err(line, format!("bad integer `{}`", toks[2])))?;
                if p + qq != 4 {
                    return Err(err(line, format!("signature ({},{}) does not sum to 4", p, qq)));
                }
                if sig.replace(Signature::new(p, qq)).is_some() {
                    return Err(err(line, "duplicate sig record".into()));
                }
            }
            "e" => {
                if toks.len() != 8 {
                    return Err(err(line, "e takes A MU COEFF and 4 exponents".into()));
                }
                let a = parse_idx(toks[1], 4, "frame").map_err(|m| err(line, m))?;
                let mu = parse_idx(toks[2], 4, "chart").map_err(|m| err(line, m))?;
                let c = parse_q(toks[3]).map_err(|m| err(line, m))?;
                let expo = parse_expo(&toks[4..]).map_err(|m| err(line, m))?;
                let tgt = e.get_or_insert_with(|| vec![vec![Poly::zero(4); 4]; 4]);
                tgt[a][mu] = tgt[a][mu].add(&Poly::monomial(4, expo, c));
            }
            "omega" => {
                if toks.len() != 8 {
                    return Err(err(line, "omega takes I MU COEFF and 4 exponents".into()));
                }
                let i = parse_idx(toks[1], 6, "rotation").map_err(|m| err(line, m))?;
                let mu = parse_idx(toks[2], 4, "chart").map_err(|m| err(line, m))?;
                let c = parse_q(toks[3]).map_err(|m| err(line, m))?;
                let expo = parse_expo(&toks[4..]).map_err(|m| err(line, m))?;
                omega[i][mu] = omega[i][mu].add(&Poly::monomial(4, expo, c));
            }
            "psi" => {
                if toks.len() != 8 {
                    return Err(err(line, "psi takes ALPHA re|im COEFF and 4 exponents".into()));
                }
                let alpha = parse_idx(toks[1], 4, "spinor").map_err(|m| err(line, m))?;
                let part = toks[2];
                if part != "re" && part != "im" {
                    return Err(err(line, format!("expected re or im, got `{}`", part)));
                }
                let c = parse_q(toks[3]).map_err(|m| err(line, m))?;
                let expo = parse_expo(&toks[4..]).map_err(|m| err(line, m))?;
                let z = if part == "re" {
                    cq(c, Q::zero())
                } else {
                    cq(Q::zero(), c)
                };
                let tgt = psi.get_or_insert_with(|| vec![Poly::zero(4); 4]);
                tgt[alpha] = tgt[alpha].add(&Poly::monomial(4, expo, z));
            }
            "mass" => {
                if toks.len() != 2 {
                    return Err(err(line, "mass takes one rational".into()));
                }
                let c = parse_q(toks[1]).map_err(|m| err(line, m))?;
                if mass.replace(c).is_some() {
                    return Err(err(line, "duplicate mass record".into()));
                }
            }
            "point" => {
                if toks.len() != 5 {
                    return Err(err(line, "point takes 4 coordinates".into()));
                }
                let pt: Result<Vec<Q>, String> = toks[1..].iter().map(|t| parse_q(t)).collect();
                points.push(pt.map_err(|m| err(line, m))?);
            }
            other => return Err(err(line, format!("unknown record `{}`", other))),
        }
    }

    let sig = sig.ok_or_else(|| err(0, "missing sig record".into()))?;
    let e = e.unwrap_or_else(|| GeometryState::flat(sig).e.clone());
    let mut geom = GeometryState::new(sig, e, omega);
    for pt in points {
        let rendered = pt.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        geom.register_point(pt)
            .map_err(|_| StateIoError::SingularPoint { point: rendered })?;
    }
    if psi.is_some() || mass.is_some() {
        let psi = psi.unwrap_or_else(|| vec![Poly::zero(4); 4]);
        let mass = mass.unwrap_or_else(Q::zero);
        Ok(LoadedState::Field(FieldState::new(geom, psi, mass)))
    } else {
        Ok(LoadedState::Geometry(geom))
    }
}

pub fn load_state(path: impl AsRef<Path>) -> Result<LoadedState, StateIoError> {
    let p = path.as_ref();
    let text = fs::read_to_string(p)?;
    parse_state(&text, &p.display().to_string())
}

fn push_poly_records(out: &mut String, tag: &str, idx: &[usize], p: &Poly<Q>) {
    for (expo, c) in p.terms() {
        if c.is_zero() {
            continue;
        }
        let _ = write!(out, "{}", tag);
        for i in idx {
            let _ = write!(out, " {}", i);
        }
        let _ = write!(out, " {}", c);
        for x in expo {
            let _ = write!(out, " {}", x);
        }
        out.push('\n');
    }
}

/// Canonical text for a loaded state: an exactly-identity vielbein is left
/// implicit, zero terms are dropped, and record order is fixed (sig, e,
/// omega, psi, mass, points).
pub fn serialize_state(state: &LoadedState) -> String {
    let geom = state.geometry();
    let mut out = String::new();
    let _ = writeln!(out, "sig {} {}", geom.sig.p, geom.sig.q);
    let flat = GeometryState::flat(geom.sig);
    if geom.e != flat.e {
        for a in 0..4 {
            for mu in 0..4 {
                push_poly_records(&mut out, "e", &[a, mu], &geom.e[a][mu]);
            }
        }
    }
    for i in 0..6 {
        for mu in 0..4 {
            push_poly_records(&mut out, "omega", &[i, mu], &geom.omega[i][mu]);
        }
    }
    if let Some(fs) = state.field() {
        for (alpha, p) in fs.psi.iter().enumerate() {
            for (expo, z) in p.terms() {
                for (part, val) in [("re", &z.re), ("im", &z.im)] {
                    if !val.is_zero() {
                        let _ = write!(out, "psi {} {} {}", alpha, part, val);
                        for x in expo {
                            let _ = write!(out, " {}", x);
                        }
                        out.push('\n');
                    }
                }
            }
        }
        let _ = writeln!(out, "mass {}", fs.mass);
    }
    for pt in geom.points() {
        let _ = write!(out, "point");
        for x in pt {
            let _ = write!(out, " {}", x);
        }
        out.push('\n');
    }
    out
}

/// Parse-and-reserialize; the canonical fixed point of the format.
pub fn normalize_text(text: &str, path: &str) -> Result<String, StateIoError> {
    Ok(serialize_state(&parse_state(text, path)?))
}
