//! Text formats for networks, node weights, motifs and frequency matrices.
//!
//! Edge list:
//! ```text
//! # comment
//! n 4
//! alpha 0.25 0.25 0.25 0.25   (optional, defaults to uniform)
//! 0 1 0.5                     (source target weight, 0-based)
//! ```
//! Motif files use `k <K>` and `i j [weight]` lines. Frequency matrices are
//! `n` followed by `n` rows of `n` numbers.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::motif::Motif;
use crate::network::Network;
use crate::scalar::Real;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num<T: Real>(tok: &str, line: usize) -> Result<T> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse { line, msg: format!("`{tok}` is not a number") })?;
    T::from_f64(v).ok_or_else(|| Error::Parse { line, msg: format!("`{tok}` does not fit the scalar type") })
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("`{tok}` is not a node index") })
}

fn header(lines: &mut dyn Iterator<Item = (usize, &str)>, key: &str) -> Result<usize> {
    let (line, l) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let mut toks = l.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some(k), Some(v), None) if k == key => parse_index(v, line),
        _ => Err(Error::Parse { line, msg: format!("expected `{key} <count>`") }),
    }
}

pub fn parse_network<T: Real>(text: &str) -> Result<Network<T>> {
    let mut lines = content_lines(text).peekable();
    let n = header(&mut lines, "n")?;
    let mut alpha = None;
    if let Some((line, l)) = lines.peek().copied() {
        if let Some(rest) = l.strip_prefix("alpha") {
            let values = rest.split_whitespace().map(|t| parse_num::<T>(t, line)).collect::<Result<Vec<T>>>()?;
            if values.len() != n {
                return Err(Error::Parse { line, msg: format!("alpha has {} values, expected {n}", values.len()) });
            }
            alpha = Some(values);
            lines.next();
        }
    }
    let mut entries = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse { line, msg: "expected `source target weight`".into() });
        }
        let (i, j) = (parse_index(toks[0], line)?, parse_index(toks[1], line)?);
        if i >= n || j >= n {
            return Err(Error::Parse { line, msg: format!("node index out of range for n = {n}") });
        }
        entries.push((i, j, parse_num(toks[2], line)?));
    }
    Network::from_entries(n, entries, alpha)
}

/// Edge list with node weights. Values are printed in shortest round-trip
/// form, so parsing the output reproduces the network exactly.
pub fn format_network<T: Real>(net: &Network<T>) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", net.n()).unwrap();
    out.push_str("alpha");
    for a in net.alpha() {
        write!(out, " {}", a.to_f64_lossy()).unwrap();
    }
    out.push('\n');
    for (i, j, w) in net.entries() {
        writeln!(out, "{i} {j} {}", w.to_f64_lossy()).unwrap();
    }
    out
}

/// One positive value per line.
pub fn parse_alpha<T: Real>(text: &str) -> Result<Vec<T>> {
    content_lines(text).map(|(line, l)| parse_num(l, line)).collect()
}

/// A motif name such as `P_3`, `F_1_1` or `C_4`, or a motif file.
pub fn parse_motif_spec<T: Real>(spec: &str) -> Result<Motif<T>> {
    match Motif::named(spec) {
        Ok(m) => Ok(m),
        Err(named_err) => {
            let path = Path::new(spec);
            if path.exists() {
                parse_motif(&std::fs::read_to_string(path)?)
            } else {
                Err(named_err)
            }
        }
    }
}

pub fn parse_motif<T: Real>(text: &str) -> Result<Motif<T>> {
    let mut lines = content_lines(text);
    let k = header(&mut lines, "k")?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let w = match toks.len() {
            2 => T::one(),
            3 => parse_num(toks[2], line)?,
            _ => return Err(Error::Parse { line, msg: "expected `i j [weight]`".into() }),
        };
        edges.push((parse_index(toks[0], line)?, parse_index(toks[1], line)?, w));
    }
    let mut a = vec![T::zero(); k * k];
    for (i, j, w) in edges {
        if i >= k || j >= k {
            return Err(Error::InvalidMotif(format!("edge ({i},{j}) outside k = {k}")));
        }
        a[i * k + j] = w;
    }
    Motif::from_dense(k, a)
}

/// Square nonnegative count matrix: `n`, then `n` rows of `n` numbers.
pub fn parse_frequency_matrix(text: &str) -> Result<(usize, Vec<f64>)> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let n = parse_index(first, line)?;
    let mut m = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line, l) in lines {
        let row = l.split_whitespace().map(|t| parse_num::<f64>(t, line)).collect::<Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(Error::DimensionMismatch(format!("line {line}: row has {} entries, expected {n}", row.len())));
        }
        if row.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidArgument(format!("line {line}: negative frequency")));
        }
        m.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(Error::DimensionMismatch(format!("{rows} rows, expected {n}")));
    }
    Ok((n, m))
}

pub fn format_frequency_matrix(n: usize, m: &[f64]) -> String {
    let mut out = format!("{n}\n");
    for row in m.chunks(n) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_network<T: Real>(path: &Path) -> Result<Network<T>> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub fn read_frequency_matrix(path: &Path) -> Result<(usize, Vec<f64>)> {
    parse_frequency_matrix(&std::fs::read_to_string(path)?)
}

/// Row-major matrix as CSV without a header.
pub fn format_matrix_csv<T: Real>(n: usize, m: &[T]) -> String {
    let mut out = String::new();
    for row in m.chunks(n) {
        let cells: Vec<String> = row.iter().map(|v| crate::clustering::format_height(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_round_trip_is_exact() {
        let net = Network::<f64>::from_dense(
            3,
            vec![0.1, 1.0 / 3.0, 0.0, 0.0, 0.0, 2.5e-7, 0.7, 0.0, 0.9],
            Some(vec![0.2, 0.3, 0.5]),
        )
        .unwrap();
        let back: Network<f64> = parse_network(&format_network(&net)).unwrap();
        assert_eq!(back.to_dense(), net.to_dense());
        assert_eq!(back.alpha(), net.alpha());
        let odd = Network::<f64>::from_dense(3, vec![1.0; 9], Some(vec![1.0, 1.0, 1.0])).unwrap();
        let back: Network<f64> = parse_network(&format_network(&odd)).unwrap();
        assert_eq!(back.alpha(), odd.alpha());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_network::<f64>("n 2\n0 1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_network::<f64>("n 2\n0 5 1\n").is_err());
        assert!(parse_network::<f64>("m 2\n").is_err());
    }

    #[test]
    fn uniform_alpha_by_default() {
        let net: Network<f64> = parse_network("# demo\nn 2\n0 1 1\n1 0 1\n").unwrap();
        assert_eq!(net.alpha(), &[0.5, 0.5]);
    }

    #[test]
    fn motif_file_and_names() {
        let m: Motif<f64> = parse_motif("k 3\n0 1\n1 2 0.5\n").unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.weight(1, 2), 0.5);
        let p: Motif<f64> = parse_motif_spec("P_3").unwrap();
        assert_eq!(p.edge_count(), 2);
        assert!(parse_motif_spec::<f64>("no_such_motif").is_err());
    }

    #[test]
    fn frequency_matrix() {
        let (n, m) = parse_frequency_matrix("2\n1 2\n3 0\n").unwrap();
        assert_eq!((n, m.clone()), (2, vec![1.0, 2.0, 3.0, 0.0]));
        assert_eq!(parse_frequency_matrix(&format_frequency_matrix(n, &m)).unwrap().1, m);
        assert!(parse_frequency_matrix("2\n1 2\n").is_err());
        assert!(parse_frequency_matrix("2\n1 2 3\n1 1\n").is_err());
        assert!(parse_frequency_matrix("1\n-1\n").is_err());
    }
}
