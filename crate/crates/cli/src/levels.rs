use std::str::FromStr;

/// Quantum numbers given as `3`, `0..2` (inclusive) or a comma list of either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexList(pub Vec<u32>);

impl FromStr for IndexList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("`{t}` is not a non-negative integer"));
        let mut out = Vec::new();
        for part in s.split(',') {
            match part.split_once("..") {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a > b {
                        return Err(format!("empty range {a}..{b}"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(num(part)?),
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(IndexList(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_lists() {
        assert_eq!("0..2".parse(), Ok(IndexList(vec![0, 1, 2])));
        assert_eq!("4".parse(), Ok(IndexList(vec![4])));
        assert_eq!("3, 0..1,1".parse(), Ok(IndexList(vec![0, 1, 3])));
        assert!("2..1".parse::<IndexList>().is_err());
        assert!("-1".parse::<IndexList>().is_err());
        assert!("".parse::<IndexList>().is_err());
    }
}
