//! Text formats for chains and distributors.
//!
//! ```text
//! mrc 3
//! init 0:0.5 1:0.5
//! reward 2 0 1
//! rate 0 1 1.0
//! fast 2 0 4
//! ```
//!
//! Diagonals are derived; a source/target pair may appear once per kind.
//! A distributor file is `dist <N> <n>` followed by `N` rows of `n` reals.

use std::collections::HashSet;

use super::MrcFast;
use crate::algebra::RealMatrix;
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number(word: &str, line: usize) -> Result<f64> {
    let x: f64 = word
        .parse()
        .map_err(|_| Error::parse(line, format!("bad number `{word}`")))?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("non-finite number `{word}`")));
    }
    Ok(x)
}

fn state(word: &str, n: usize, line: usize) -> Result<usize> {
    let i: usize = word
        .parse()
        .map_err(|_| Error::parse(line, format!("bad state index `{word}`")))?;
    if i >= n {
        return Err(Error::parse(line, format!("state {i} out of range 0..{n}")));
    }
    Ok(i)
}

fn expect<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    keyword: &str,
) -> Result<(usize, Vec<&'a str>)> {
    match lines.next() {
        Some((line, words)) if words[0] == keyword => Ok((line, words[1..].to_vec())),
        Some((line, words)) => Err(Error::parse(
            line,
            format!("expected `{keyword}`, found `{}`", words[0]),
        )),
        None => Err(Error::parse(0, format!("missing `{keyword}` line"))),
    }
}

fn count(args: &[&str], line: usize, usage: &str) -> Result<usize> {
    match args {
        [n] => n
            .parse()
            .map_err(|_| Error::parse(line, format!("bad count `{n}`"))),
        _ => Err(Error::parse(line, format!("expected `{usage}`"))),
    }
}

/// Parses a chain; without `fast` lines the fast generator is zero.
pub fn parse_mrc(text: &str) -> Result<MrcFast> {
    let mut lines = content_lines(text);
    let (line, args) = expect(&mut lines, "mrc")?;
    let n = count(&args, line, "mrc <n>")?;
    if n == 0 {
        return Err(Error::parse(line, "a chain needs at least one state"));
    }

    let (line, args) = expect(&mut lines, "init")?;
    let mut sigma = vec![0.0; n];
    let mut seen = HashSet::new();
    for arg in args {
        let (i, p) = arg
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("expected `<state>:<prob>`, found `{arg}`")))?;
        let i = state(i, n, line)?;
        if !seen.insert(i) {
            return Err(Error::parse(line, format!("state {i} listed twice")));
        }
        sigma[i] = number(p, line)?;
    }

    let (line, args) = expect(&mut lines, "reward")?;
    if args.len() != n {
        return Err(Error::parse(line, format!("expected {n} rewards, found {}", args.len())));
    }
    let rho = args
        .iter()
        .map(|w| number(w, line))
        .collect::<Result<Vec<_>>>()?;

    let mut qs = RealMatrix::zeros(n, n);
    let mut qf = RealMatrix::zeros(n, n);
    let mut seen = HashSet::new();
    for (line, words) in lines {
        let [kind, src, dst, value] = words.as_slice() else {
            return Err(Error::parse(line, "expected `rate|fast <src> <dst> <value>`"));
        };
        let target = match *kind {
            "rate" => &mut qs,
            "fast" => &mut qf,
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        };
        let (i, j) = (state(src, n, line)?, state(dst, n, line)?);
        if i == j {
            return Err(Error::parse(line, "self-rates are not allowed"));
        }
        if !seen.insert((*kind, i, j)) {
            return Err(Error::parse(line, format!("duplicate {kind} {i} -> {j}")));
        }
        let x = number(value, line)?;
        if x < 0.0 {
            return Err(Error::parse(line, format!("negative rate {x}")));
        }
        target[(i, j)] = x;
        target[(i, i)] -= x;
    }
    MrcFast::new(sigma, qs, qf, rho)
}

fn push_rates(out: &mut String, keyword: &str, q: &RealMatrix) {
    for i in 0..q.rows() {
        for j in (0..q.cols()).filter(|&j| j != i) {
            if q[(i, j)] > 0.0 {
                out.push_str(&format!("{keyword} {i} {j} {}\n", q[(i, j)]));
            }
        }
    }
}

/// Canonical text: nonzero initial entries, then slow and fast rates in
/// row-major order. Numbers round-trip exactly.
pub fn write_mrc(mrc: &MrcFast) -> String {
    let n = mrc.state_count();
    let mut out = format!("mrc {n}\ninit");
    for (i, p) in mrc.sigma().row(0).iter().enumerate() {
        if *p != 0.0 {
            out.push_str(&format!(" {i}:{p}"));
        }
    }
    out.push_str("\nreward");
    for r in mrc.rho().as_slice() {
        out.push_str(&format!(" {r}"));
    }
    out.push('\n');
    push_rates(&mut out, "rate", mrc.slow_generator());
    push_rates(&mut out, "fast", mrc.fast_generator());
    out
}

pub fn parse_distributor(text: &str) -> Result<RealMatrix> {
    let mut lines = content_lines(text);
    let (line, args) = expect(&mut lines, "dist")?;
    let (rows, cols) = match args.as_slice() {
        [r, c] => (
            count(&[r], line, "dist <N> <n>")?,
            count(&[c], line, "dist <N> <n>")?,
        ),
        _ => return Err(Error::parse(line, "expected `dist <N> <n>`")),
    };
    let mut data = Vec::with_capacity(rows);
    for (line, words) in lines {
        if words.len() != cols {
            return Err(Error::parse(line, format!("expected {cols} entries, found {}", words.len())));
        }
        data.push(words.iter().map(|w| number(w, line)).collect::<Result<Vec<_>>>()?);
    }
    if data.len() != rows {
        return Err(Error::parse(line, format!("expected {rows} rows, found {}", data.len())));
    }
    if rows == 0 {
        return Ok(RealMatrix::zeros(0, cols));
    }
    RealMatrix::from_rows(&data)
}

pub fn write_distributor(w: &RealMatrix) -> String {
    let mut out = format!("dist {} {}\n", w.rows(), w.cols());
    for i in 0..w.rows() {
        let row: Vec<String> = w.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
