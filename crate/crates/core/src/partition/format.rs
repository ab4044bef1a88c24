//! `partition <n>` followed by one line of 0-based state indices per block.

use super::Partition;
use crate::error::{Error, Result};

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `partition <n>` header"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("partition") {
        return Err(Error::parse(line_no, "expected `partition <n>`"));
    }
    let n: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| Error::parse(line_no, "expected a state count"))?;
    if words.next().is_some() {
        return Err(Error::parse(line_no, "trailing tokens after state count"));
    }

    let mut blocks = Vec::new();
    for (line_no, line) in lines {
        let block = line
            .split_whitespace()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("bad state index `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        blocks.push(block);
    }
    Partition::new(n, blocks)
}

pub fn write_partition(p: &Partition) -> String {
    let mut out = format!("partition {}\n", p.state_count());
    for block in p.blocks() {
        let states: Vec<String> = block.iter().map(ToString::to_string).collect();
        out.push_str(&states.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonicalises_block_order() {
        let p = parse_partition("# merged\npartition 4\n3 1\n0\n2\n").unwrap();
        assert_eq!(p.blocks(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(write_partition(&p), "partition 4\n0\n1 3\n2\n");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_partition("").is_err());
        assert!(parse_partition("partitions 2\n0 1\n").is_err());
        assert!(parse_partition("partition 2\n0 x\n").is_err());
        assert!(matches!(
            parse_partition("partition 3\n0 1\n"),
            Err(Error::InvalidPartition(_))
        ));
    }
}
