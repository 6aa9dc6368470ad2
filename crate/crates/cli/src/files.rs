//! `.gtab` and `.gperm` group files.

use std::fmt::Write as _;
use std::path::Path;

use grpgeo::group::{from_permutation_generators, Perm, Provenance};
use grpgeo::{FiniteGroup, Limits};
use sha2::{Digest, Sha256};

use crate::error::CliError;

fn parse_error(line: usize, column: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        column,
        msg: msg.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Splits on whitespace, keeping the 1-based column of each token.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// A header line's number and the tokens after its keyword.
type Header<'a> = (usize, Vec<(usize, &'a str)>);

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<Header<'a>, CliError> {
    let (n, line) = lines
        .next()
        .ok_or_else(|| parse_error(last_line + 1, 1, format!("expected `{key}` line")))?;
    let toks = tokens(line);
    match toks.first() {
        Some((_, k)) if *k == key => Ok((n, toks[1..].to_vec())),
        Some((c, k)) => Err(parse_error(n, *c, format!("expected `{key}`, found `{k}`"))),
        None => Err(parse_error(n, 1, format!("expected `{key}`"))),
    }
}

fn single_number(n: usize, toks: &[(usize, &str)], what: &str) -> Result<usize, CliError> {
    match toks {
        [(c, t)] => t.parse().map_err(|_| {
            parse_error(
                n,
                *c,
                format!("{what} must be a non-negative integer, found `{t}`"),
            )
        }),
        [] => Err(parse_error(n, 1, format!("missing {what}"))),
        [_, (c, _), ..] => Err(parse_error(n, *c, "unexpected trailing token")),
    }
}

#[derive(Debug)]
pub struct TableFile {
    pub rows: Vec<Vec<usize>>,
    pub labels: Option<Vec<String>>,
}

pub fn parse_gtab(text: &str) -> Result<TableFile, CliError> {
    let last_line = text.lines().count();
    let mut lines = content_lines(text).peekable();
    let (n, version) = header(&mut lines, "gtab", last_line)?;
    if single_number(n, &version, "version")? != 1 {
        return Err(parse_error(n, version[0].0, "unsupported gtab version"));
    }
    let (n, order) = header(&mut lines, "order", last_line)?;
    let order = single_number(n, &order, "order")?;
    if order == 0 {
        return Err(parse_error(n, 7, "order must be positive"));
    }
    let mut labels = None;
    if let Some((n, line)) = lines.peek().copied() {
        let toks = tokens(line);
        if toks.first().is_some_and(|(_, t)| *t == "labels") {
            lines.next();
            if toks.len() - 1 != order {
                return Err(parse_error(
                    n,
                    toks.last().map_or(1, |t| t.0),
                    format!("expected {order} labels, found {}", toks.len() - 1),
                ));
            }
            labels = Some(toks[1..].iter().map(|(_, t)| t.to_string()).collect());
        }
    }
    let mut rows = Vec::with_capacity(order);
    let mut last = 0;
    for (n, line) in lines {
        last = n;
        if rows.len() == order {
            return Err(parse_error(n, 1, "more rows than the declared order"));
        }
        let toks = tokens(line);
        if toks.len() != order {
            let col = toks.get(order).map_or(line.len() + 1, |t| t.0);
            return Err(parse_error(
                n,
                col,
                format!("expected {order} entries, found {}", toks.len()),
            ));
        }
        let row = toks
            .iter()
            .map(|(c, t)| match t.parse::<usize>() {
                Ok(v) if v < order => Ok(v),
                _ => Err(parse_error(
                    n,
                    *c,
                    format!("`{t}` is not an index below {order}"),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() < order {
        return Err(parse_error(
            last.max(last_line) + 1,
            1,
            format!("file ends after {} of {order} rows", rows.len()),
        ));
    }
    if (0..order).any(|j| rows[0][j] != j || rows[j][0] != j) {
        return Err(CliError::Group(grpgeo::Error::NotAGroup {
            reason: grpgeo::NotAGroupReason::NoIdentity,
            detail: "index 0 must be the identity".into(),
        }));
    }
    Ok(TableFile { rows, labels })
}

#[derive(Debug)]
pub struct PermFile {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

pub fn parse_gperm(text: &str) -> Result<PermFile, CliError> {
    let last_line = text.lines().count();
    let mut lines = content_lines(text);
    let (n, version) = header(&mut lines, "gperm", last_line)?;
    if single_number(n, &version, "version")? != 1 {
        return Err(parse_error(n, version[0].0, "unsupported gperm version"));
    }
    let (n, degree) = header(&mut lines, "degree", last_line)?;
    let degree = single_number(n, &degree, "degree")?;
    let mut generators = Vec::new();
    for (n, line) in lines {
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        let rest = trimmed
            .strip_prefix("gen")
            .ok_or_else(|| parse_error(n, indent + 1, "expected `gen`"))?;
        let perm = Perm::parse_cycles(rest, degree)
            .map_err(|e| parse_error(n, indent + 4, e.to_string()))?;
        generators.push(perm);
    }
    Ok(PermFile { degree, generators })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a group file; the format is chosen by its first keyword.
pub fn read_group(path: &Path, limits: &Limits) -> Result<FiniteGroup, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| parse_error(1, 1, "file is not valid UTF-8"))?;
    let provenance = Provenance::File {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    };
    let first = content_lines(&text).next().map(|(_, l)| l.trim_start());
    let group = match first {
        Some(l) if l.starts_with("gperm") => {
            let file = parse_gperm(&text)?;
            from_permutation_generators(file.degree, &file.generators, limits)?
        }
        _ => {
            let file = parse_gtab(&text)?;
            if file.rows.len() > limits.max_order {
                return Err(CliError::Group(grpgeo::Error::OrderCapExceeded {
                    order: file.rows.len(),
                    cap: limits.max_order,
                }));
            }
            FiniteGroup::from_multiplication_table(&file.rows, file.labels)?
        }
    };
    Ok(group.with_provenance(provenance))
}

/// Labels are written only when every label is a single token.
pub fn write_gtab(g: &FiniteGroup) -> String {
    let mut out = String::new();
    let n = g.order();
    writeln!(out, "gtab 1").unwrap();
    writeln!(out, "order {n}").unwrap();
    if g.labels()
        .iter()
        .all(|l| !l.is_empty() && !l.contains(char::is_whitespace))
    {
        writeln!(out, "labels {}", g.labels().join(" ")).unwrap();
    }
    for row in g.table_rows() {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

/// A `.gperm` file listing the given generators.
pub fn write_gperm(degree: usize, generators: &[Perm]) -> String {
    let mut out = format!("gperm 1\ndegree {degree}\n");
    for g in generators {
        writeln!(out, "gen {g}").unwrap();
    }
    out
}
