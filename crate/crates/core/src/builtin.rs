//! Named lattices: `2`, `chain:n`, `M:n`, `N5`, `bool:n`, `F22`.

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// The two-element lattice `0 < 1`.
pub fn two() -> FiniteLattice {
    chain(1).with_name("2")
}

/// Chain of length `n` (so `n + 1` elements): `0 < y1 < ... < y(n-1) < 1`.
/// Length zero gives the one-element lattice `{0}`.
pub fn chain(n: usize) -> FiniteLattice {
    let mut labels = vec!["0".to_string()];
    labels.extend((1..n).map(|i| format!("y{i}")));
    if n > 0 {
        labels.push("1".to_string());
    }
    FiniteLattice::chain_from_labels(format!("chain:{n}"), labels).expect("chains are lattices")
}

/// `M_n`: a bottom, `n` pairwise incomparable atoms `x1..xn`, and a top.
pub fn m(n: usize) -> FiniteLattice {
    let mut labels = vec!["0".to_string()];
    labels.extend((1..=n).map(|i| format!("x{i}")));
    labels.push("1".to_string());
    let mut covers = Vec::new();
    for i in 1..=n {
        covers.push(("0".to_string(), format!("x{i}")));
        covers.push((format!("x{i}"), "1".to_string()));
    }
    FiniteLattice::from_covers(format!("M{n}"), labels, &covers).expect("M_n is a lattice")
}

/// The pentagon with `0 < x1 < x2 < 1` and `0 < x3 < 1`.
pub fn n5() -> FiniteLattice {
    FiniteLattice::from_covers(
        "N5",
        strings(&["0", "x1", "x2", "x3", "1"]),
        &[("0", "x1"), ("x1", "x2"), ("x2", "1"), ("0", "x3"), ("x3", "1")],
    )
    .expect("N5 is a lattice")
}

/// Boolean lattice `2^n`; labels are bit strings, first bit most significant.
pub fn boolean(n: usize) -> FiniteLattice {
    let size = 1usize << n;
    let label = |x: usize| (0..n).map(|i| if x >> (n - 1 - i) & 1 == 1 { '1' } else { '0' }).collect::<String>();
    let labels: Vec<String> = (0..size).map(label).collect();
    let mut covers = Vec::new();
    for x in 0..size {
        for bit in 0..n {
            if x & (1 << bit) == 0 {
                covers.push((labels[x].clone(), labels[x | (1 << bit)].clone()));
            }
        }
    }
    let name = format!("bool:{n}");
    if n == 0 {
        return FiniteLattice::from_covers::<String>(name, vec![String::new()], &[]).expect("trivial lattice");
    }
    FiniteLattice::from_covers(name, labels, &covers).expect("Boolean lattices are lattices")
}

/// The free bounded lattice on two generators `x1`, `x2`:
/// `0 < x1^x2 < x1, x2 < x1vx2 < 1`.
pub fn f22() -> FiniteLattice {
    FiniteLattice::from_covers(
        "F22",
        strings(&["0", "x1^x2", "x1", "x2", "x1vx2", "1"]),
        &[
            ("0", "x1^x2"),
            ("x1^x2", "x1"),
            ("x1^x2", "x2"),
            ("x1", "x1vx2"),
            ("x2", "x1vx2"),
            ("x1vx2", "1"),
        ],
    )
    .expect("F22 is a lattice")
}

/// Resolves a builtin generator name, or `None` if the name is not one.
pub fn parse(name: &str) -> Option<Result<FiniteLattice>> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad size in `{name}`")));
    let out = match name {
        "2" => Ok(two()),
        "N5" => Ok(n5()),
        "F22" => Ok(f22()),
        _ => {
            if let Some(rest) = name.strip_prefix("chain:") {
                num(rest).map(chain)
            } else if let Some(rest) = name.strip_prefix("M:") {
                num(rest).and_then(|n| {
                    if n >= 3 {
                        Ok(m(n))
                    } else {
                        Err(Error::Parse(format!("`{name}`: M:n needs n >= 3")))
                    }
                })
            } else {
                let rest = name.strip_prefix("bool:")?;
                num(rest).and_then(|n| {
                    if n <= 12 {
                        Ok(boolean(n))
                    } else {
                        Err(Error::SizeCapExceeded { size: 1 << n.min(60), cap: 4096 })
                    }
                })
            }
        }
    };
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_sizes() {
        assert_eq!(two().len(), 2);
        assert_eq!(chain(0).len(), 1);
        assert_eq!(chain(3).len(), 4);
        assert_eq!(m(4).len(), 6);
        assert_eq!(n5().len(), 5);
        assert_eq!(boolean(3).len(), 8);
        assert_eq!(f22().len(), 6);
    }

    #[test]
    fn parse_names() {
        assert_eq!(parse("M:3").unwrap().unwrap(), m(3));
        assert_eq!(parse("chain:2").unwrap().unwrap(), chain(2));
        assert!(parse("M:2").unwrap().is_err());
        assert!(parse("foo.lat").is_none());
    }

    #[test]
    fn generators_obey_laws() {
        for l in [two(), chain(5), m(5), n5(), boolean(3), f22()] {
            l.check_laws().unwrap();
        }
        assert!(n5().distributivity_witness().is_some());
        assert!(!m(3).is_distributive() && m(3).is_modular());
        assert!(!n5().is_modular());
        assert!(f22().is_distributive());
    }
}
