//! Named witnesses, pairs and states on the command line.
//!
//! Ids look like `family` or `family:args`, e.g. `w3q:110`, `ghz-c:4`,
//! `choi-phi:pi/3`, `rho-bc:2,0.5`, `graph:grid:2x3` or `file:op.json`.

use std::f64::consts::PI;

use ewitness::catalog::{self, BellExample, WitnessClass};
use ewitness::graphs::{Graph, GraphKind};
use ewitness::linops::Operator;
use ewitness::{Error, MirrorPair, Result, StateSpec, Witness};
use serde::Deserialize;

pub struct Resolved {
    pub witness: Witness,
    /// Known partner when the family defines one.
    pub pair: Option<MirrorPair>,
}

impl Resolved {
    fn plain(witness: Witness) -> Self {
        Resolved { witness, pair: None }
    }

    fn pair(pair: MirrorPair) -> Self {
        Resolved {
            witness: pair.w.clone(),
            pair: Some(pair),
        }
    }
}

pub const WITNESS_IDS: &[&str] = &[
    "example1",
    "example2",
    "ghz-c:N",
    "ghz-a:N",
    "ghz-2m:N",
    "ghz-graph:N",
    "graph:KIND:SIZE | graph:FILE",
    "graph-2m:KIND:SIZE | graph-2m:FILE",
    "w3q:IJK",
    "m3q:IJK",
    "choi-phi:PHI",
    "choi:A,B,C",
    "covariant:A0,A1,...",
    "class1:THETA",
    "class2:THETA",
    "wabcd:A,B,C,D",
    "m1110",
    "pair33",
    "pair33-m",
    "w-opt[:S2,S3,S4,THETA]",
    "file:PATH",
];

pub const STATE_IDS: &[&str] = &[
    "ghz:N",
    "ghz-a:N",
    "rho-bc:B,C",
    "rho-xyz:X,Y,Z",
    "rho-x:X",
    "tau[:J,K]",
    "pair33-rho-w",
    "pair33-rho-m",
    "phi-plus",
    "psi-minus",
    "file:PATH",
];

/// A real number, optionally a multiple of pi: `0.5`, `pi/3`, `2pi/3`, `3*pi/4`, `-pi`.
pub fn parse_real(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("cannot read {s:?} as a number"));
    let t = s.trim().to_ascii_lowercase();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let val = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim_end_matches('*').trim();
        let k = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        k * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(val / den)
}

fn reals(s: &str, count: Option<usize>) -> Result<Vec<f64>> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_>>()?;
    if let Some(k) = count {
        if v.len() != k {
            return Err(Error::Parse(format!("expected {k} numbers, got {:?}", s)));
        }
    }
    Ok(v)
}

fn size(s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad size {s:?}")))
}

fn bits(s: &str) -> Result<[u8; 3]> {
    let b: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("bad index triple {s:?}"))),
        })
        .collect::<Result<_>>()?;
    b.try_into()
        .map_err(|_| Error::Parse(format!("index triple {s:?} must have 3 digits")))
}

#[derive(Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// `KIND:SIZE` for a named graph, otherwise a JSON file `{"n": .., "edges": [[a, b], ..]}`.
pub fn parse_graph(arg: &str) -> Result<Graph> {
    if let Ok(kind) = GraphKind::parse(arg) {
        return Graph::named(kind);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::Parse(format!("graph {arg:?}: {e}")))?;
    let g: GraphFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("graph file {arg:?}: {e}")))?;
    Graph::new(g.n, g.edges)
}

fn read_operator(path: &str) -> Result<Operator> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("operator file {path:?}: {e}")))
}

fn unknown(kind: &str, id: &str) -> Error {
    Error::Parse(format!("unknown {kind} {id:?}"))
}

pub fn witness(id: &str) -> Result<Resolved> {
    let (fam, arg) = match id.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (id, None),
    };
    let need = || arg.ok_or_else(|| Error::Parse(format!("{fam} needs an argument")));
    Ok(match fam {
        "example1" => Resolved::pair(catalog::bell_pair_witness(BellExample::Example1)?),
        "example2" => Resolved::pair(catalog::bell_pair_witness(BellExample::Example2)?),
        "ghz-c" => Resolved::pair(catalog::canonical_ghz_pair(size(need()?)?)?),
        "ghz-a" => Resolved::pair(catalog::alternative_ghz_witness(size(need()?)?)?),
        "ghz-2m" => Resolved::pair(catalog::two_measurement_ghz(size(need()?)?)?),
        "ghz-graph" => Resolved::pair(catalog::ghz_graph_witness(size(need()?)?)?),
        "graph" => Resolved::pair(catalog::graph_witness(&parse_graph(need()?)?)?),
        "graph-2m" => Resolved::pair(catalog::two_measurement_witness(&parse_graph(need()?)?)?),
        "w3q" => Resolved::pair(catalog::w3q_pair(bits(need()?)?)?),
        "m3q" => Resolved::plain(catalog::m3q(bits(need()?)?)?),
        "choi-phi" => Resolved::plain(catalog::choi_phi(parse_real(need()?)?)?),
        "choi" => {
            let v = reals(need()?, Some(3))?;
            Resolved::plain(catalog::choi_abc(v[0], v[1], v[2])?)
        }
        "covariant" => Resolved::plain(catalog::covariant_witness(&reals(need()?, None)?)?),
        "class1" => Resolved::plain(catalog::wabcd_class(WitnessClass::I, parse_real(need()?)?)?),
        "class2" => Resolved::plain(catalog::wabcd_class(WitnessClass::II, parse_real(need()?)?)?),
        "wabcd" => {
            let v = reals(need()?, Some(4))?;
            Resolved::plain(catalog::wabcd(v[0], v[1], v[2], v[3])?)
        }
        "m1110" => Resolved::pair(catalog::m1110_pair()?),
        "pair33" => Resolved::pair(catalog::pair33()?.pair),
        "pair33-m" => {
            let p = catalog::pair33()?.pair;
            Resolved::plain(p.w.relabel(p.m.clone(), "pair33-mirror"))
        }
        "w-opt" => {
            let v = match arg {
                Some(a) => reals(a, Some(4))?,
                None => vec![2.0, 3.0, 0.5, PI / 4.0],
            };
            Resolved::plain(catalog::w_opt(v[0], v[1], v[2], v[3])?)
        }
        "file" => Resolved::plain(Witness::new(read_operator(need()?)?, "file")),
        _ => return Err(unknown("witness", id)),
    })
}

pub fn state(id: &str) -> Result<StateSpec> {
    let (fam, arg) = match id.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (id, None),
    };
    let need = || arg.ok_or_else(|| Error::Parse(format!("{fam} needs an argument")));
    match fam {
        "ghz" => catalog::ghz_state(size(need()?)?),
        "ghz-a" => catalog::ghz_a_state(size(need()?)?),
        "rho-bc" => {
            let v = reals(need()?, Some(2))?;
            catalog::rho_bc(v[0], v[1])
        }
        "rho-xyz" => {
            let v = reals(need()?, Some(3))?;
            catalog::rho_xyz(v[0], v[1], v[2])
        }
        "rho-x" => catalog::rho_x(parse_real(need()?)?),
        "tau" => {
            let (j, k) = match arg {
                Some(a) => {
                    let (j, k) = a
                        .split_once(',')
                        .ok_or_else(|| Error::Parse(format!("tau needs J,K, got {a:?}")))?;
                    (size(j)?, size(k)?)
                }
                None => (1, 1),
            };
            catalog::tau_state(4, j, k)
        }
        "pair33-rho-w" => Ok(catalog::pair33()?.rho_w),
        "pair33-rho-m" => Ok(catalog::pair33()?.rho_m),
        "phi-plus" => StateSpec::from_vector(
            &catalog::phi_plus(),
            ewitness::Dims::qubits(2),
            "phi-plus",
        ),
        "psi-minus" => StateSpec::from_vector(
            &catalog::psi_minus(),
            ewitness::Dims::qubits(2),
            "psi-minus",
        ),
        "file" => StateSpec::new(read_operator(need()?)?, "file"),
        _ => Err(unknown("state", id)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_with_pi() {
        assert!((parse_real("pi/3").unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((parse_real("2pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_real("3*pi/4").unwrap() - 0.75 * PI).abs() < 1e-15);
        assert!((parse_real("-pi").unwrap() + PI).abs() < 1e-15);
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert!(parse_real("x").is_err());
    }

    #[test]
    fn ids_resolve() {
        assert!(witness("w3q:110").unwrap().pair.is_some());
        assert!(witness("graph:grid:2x2").is_ok());
        assert!(witness("choi-phi:pi/3").is_ok());
        assert!(witness("nope").is_err());
        assert!(state("rho-bc:2,0.5").is_ok());
        assert!(state("rho-bc:2,0.1").is_err());
        assert!(state("tau").is_ok());
    }
}
