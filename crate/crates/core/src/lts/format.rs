//! Line-oriented text format:
//!
//! ```text
//! lts 4
//! alphabet a b c d
//! init 0
//! term 0 3
//! 0 a 1
//! 1 tau 2
//! ```
//!
//! `#` starts a comment. The label `tau` feeds the internal matrix.

use super::Lts;
use crate::algebra::{ActionAlphabet, ActionSet, TAU};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn index(word: &str, n: usize, line: usize) -> Result<usize> {
    let i: usize = word
        .parse()
        .map_err(|_| Error::parse(line, format!("bad state index `{word}`")))?;
    if i >= n {
        return Err(Error::parse(line, format!("state {i} out of range 0..{n}")));
    }
    Ok(i)
}

fn header<'a>(
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

pub fn parse_lts(text: &str) -> Result<Lts> {
    let mut lines = content_lines(text);

    let (line, args) = header(&mut lines, "lts")?;
    let n: usize = match args.as_slice() {
        [n] => n
            .parse()
            .map_err(|_| Error::parse(line, format!("bad state count `{n}`")))?,
        _ => return Err(Error::parse(line, "expected `lts <n>`")),
    };
    if n == 0 {
        return Err(Error::parse(line, "a system needs at least one state"));
    }

    let (line, labels) = header(&mut lines, "alphabet")?;
    let alphabet = ActionAlphabet::new(labels.iter().copied())
        .map_err(|e| Error::parse(line, e.to_string()))?;

    let (line, args) = header(&mut lines, "init")?;
    let initial = match args.as_slice() {
        [i] => index(i, n, line)?,
        _ => return Err(Error::parse(line, "expected `init <i>`")),
    };

    let (line, args) = header(&mut lines, "term")?;
    let terminating = args
        .iter()
        .map(|w| index(w, n, line))
        .collect::<Result<Vec<_>>>()?;

    let mut visible = Vec::new();
    let mut internal = Vec::new();
    for (line, words) in lines {
        let [src, label, dst] = words.as_slice() else {
            return Err(Error::parse(line, "expected `<src> <label> <dst>`"));
        };
        let (src, dst) = (index(src, n, line)?, index(dst, n, line)?);
        if *label == TAU {
            internal.push((src, dst));
        } else {
            let a = alphabet
                .index_of(label)
                .ok_or_else(|| Error::parse(line, format!("unknown label `{label}`")))?;
            visible.push((src, ActionSet::singleton(a), dst));
        }
    }
    Lts::new(alphabet, n, initial, &visible, &internal, &terminating)
}

/// Canonical text: transitions by source, then target, then label order
/// with `tau` last.
pub fn write_lts(lts: &Lts) -> String {
    let n = lts.state_count();
    let al = lts.alphabet();
    let mut out = format!("lts {n}\n");
    out.push_str("alphabet");
    for name in al.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    out.push_str(&format!("init {}\n", lts.initial_state()));
    out.push_str("term");
    for s in (0..n).filter(|&s| lts.is_terminating(s)) {
        out.push_str(&format!(" {s}"));
    }
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            for a in lts.visible().get(i, j).indices() {
                out.push_str(&format!("{i} {} {j}\n", al.label(a)));
            }
            if lts.internal().is_one(i, j) {
                out.push_str(&format!("{i} {TAU} {j}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::figure_one;

    const FIGURE_ONE: &str = "\
# four states, s1..s4 numbered from 0
lts 4
alphabet a b c d
init 0
term 0 3
0 a 1
0 a 2
1 b 3
1 c 3
2 b 3
3 d 2
";

    #[test]
    fn parses_figure_one() {
        assert_eq!(parse_lts(FIGURE_ONE).unwrap(), figure_one());
    }

    #[test]
    fn write_then_parse_is_identity() {
        let lts = parse_lts(FIGURE_ONE).unwrap();
        let text = write_lts(&lts);
        assert_eq!(parse_lts(&text).unwrap(), lts);
    }

    #[test]
    fn duplicates_are_idempotent_and_tau_feeds_internal() {
        let text = "lts 2\nalphabet a\ninit 0\nterm\n0 tau 1\n0 tau 1\n0 a 1\n0 a 1\n";
        let lts = parse_lts(text).unwrap();
        assert!(lts.internal().is_one(0, 1));
        assert_eq!(lts.visible().get(0, 1), lts.alphabet().set_of(["a"]).unwrap());
        assert!(!lts.is_terminating(0) && !lts.is_terminating(1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let unknown = "lts 2\nalphabet a\ninit 0\nterm\n0 b 1\n";
        assert!(matches!(parse_lts(unknown), Err(Error::Parse { line: 5, .. })));
        let out_of_range = "lts 2\nalphabet a\ninit 2\nterm\n";
        assert!(matches!(parse_lts(out_of_range), Err(Error::Parse { line: 3, .. })));
        let misordered = "lts 2\ninit 0\nalphabet a\nterm\n";
        assert!(parse_lts(misordered).is_err());
        let tau_in_alphabet = "lts 1\nalphabet tau\ninit 0\nterm\n";
        assert!(parse_lts(tau_in_alphabet).is_err());
        assert!(parse_lts("lts 1\nalphabet\ninit 0\nterm\n0 a\n").is_err());
    }
}
