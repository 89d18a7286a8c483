//! The four involutions `b1..b4`, the pull-up maps and the transpositions `d_{m,p}`.

use super::address::{complete_leaves, underlined_leaves, Address};
use super::element::VnElement;
use crate::error::{Error, Result};

fn require_n3(n: u8) -> Result<()> {
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "arity {n}: the four-involution construction needs n >= 3"
        )));
    }
    Ok(())
}

fn build(n: u8, pairs: Vec<(Address, Address)>) -> Result<VnElement> {
    Ok(VnElement::from_pairs(n, pairs)?.canonicalize_owned())
}

/// `b_which` for `which` in `1..=4`.
pub fn generator(n: u8, which: u8) -> Result<VnElement> {
    require_n3(n)?;
    let big = n as usize * n as usize;
    match which {
        1 => {
            let perm: Vec<usize> = (0..big).map(|k| big - 1 - k).collect();
            VnElement::sym(n, 2, &perm)
        }
        2 => {
            let perm: Vec<usize> = (0..big).map(|k| (big - k) % big).collect();
            VnElement::sym(n, 2, &perm)
        }
        3 => {
            let mut perm: Vec<usize> = (0..big).collect();
            perm.swap(0, 1);
            VnElement::sym(n, 2, &perm)
        }
        4 => {
            let leaves = underlined_leaves(n);
            let mut perm: Vec<usize> = (0..leaves.len()).collect();
            // 00 is first, 1 follows the n leaves 0i
            perm.swap(0, n as usize);
            VnElement::from_leaf_permutation(n, &leaves, &perm)
        }
        _ => Err(Error::OutOfRange(format!("generator index {which}"))),
    }
}

/// `b↑`: 00↦0, 01↦10, 0i↦1i (i ≥ 2), 1↦11, j↦j (j ≥ 2).
pub fn pull_up(n: u8) -> Result<VnElement> {
    require_n3(n)?;
    let mut pairs = vec![
        (Address::new(&[0, 0]), Address::new(&[0])),
        (Address::new(&[0, 1]), Address::new(&[1, 0])),
    ];
    for i in 2..n {
        pairs.push((Address::new(&[0, i]), Address::new(&[1, i])));
    }
    pairs.push((Address::new(&[1]), Address::new(&[1, 1])));
    for j in 2..n {
        pairs.push((Address::new(&[j]), Address::new(&[j])));
    }
    build(n, pairs)
}

/// `b↑↑`: 00↦0, 02↦20, 0i↦2i (i ∉ {0,2}), 2↦22, j↦j (j ∉ {0,2}).
pub fn pull_up2(n: u8) -> Result<VnElement> {
    require_n3(n)?;
    let mut pairs = vec![
        (Address::new(&[0, 0]), Address::new(&[0])),
        (Address::new(&[0, 2]), Address::new(&[2, 0])),
    ];
    for i in (1..n).filter(|&i| i != 2) {
        pairs.push((Address::new(&[0, i]), Address::new(&[2, i])));
    }
    pairs.push((Address::new(&[2]), Address::new(&[2, 2])));
    for j in (1..n).filter(|&j| j != 2) {
        pairs.push((Address::new(&[j]), Address::new(&[j])));
    }
    build(n, pairs)
}

/// The transposition of `0^{p+m}` and `0^p 1`.
pub fn d_element(n: u8, m: usize, p: usize) -> Result<VnElement> {
    require_n3(n)?;
    if m < 1 {
        return Err(Error::OutOfRange(format!("m = {m} must be at least 1")));
    }
    let a = Address::zeros(p + m);
    let b = Address::zeros(p).child(1);
    VnElement::transposition(n, &a, &b)
}

/// Oracle transposition of two incomparable addresses.
pub fn transposition_element(n: u8, a: &Address, b: &Address) -> Result<VnElement> {
    VnElement::transposition(n, a, b)
}

/// Index of an address in `Lea(τ̄_k)` with `k = a.len()`.
pub fn lex_index(n: u8, a: &Address) -> usize {
    a.digits()
        .iter()
        .fold(0usize, |acc, &d| acc * n as usize + d as usize)
}

/// Leaves of `τ̄_k` as the addresses behind `lex_index`.
pub fn depth_leaves(n: u8, k: usize) -> Vec<Address> {
    complete_leaves(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Address {
        Address::parse(3, s).unwrap()
    }

    fn image_table(x: &VnElement) -> Vec<(String, String)> {
        x.pairs()
            .map(|(d, r)| (d.to_string(), r.to_string()))
            .collect()
    }

    #[test]
    fn small_arity_rejected() {
        assert!(generator(2, 1).is_err());
        assert!(pull_up(2).is_err());
        assert!(generator(3, 5).is_err());
    }

    #[test]
    fn b4_figure() {
        let b4 = generator(3, 4).unwrap();
        let t = image_table(&b4);
        let want = [("00", "1"), ("01", "01"), ("02", "02"), ("1", "00"), ("2", "2")];
        assert_eq!(
            t,
            want.iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect::<Vec<_>>()
        );
        assert_eq!(b4.invert(), b4);
    }

    #[test]
    fn pull_ups_send_00_to_0() {
        assert_eq!(pull_up(3).unwrap().apply(&a("00")), Some(a("0")));
        assert_eq!(pull_up2(3).unwrap().apply(&a("02")), Some(a("20")));
        for n in 3..=5 {
            let u = pull_up(n).unwrap();
            assert!(u.compose(&u.invert()).unwrap().is_identity());
            let u2 = pull_up2(n).unwrap();
            assert!(u2.compose(&u2.invert()).unwrap().is_identity());
        }
    }

    #[test]
    fn d_two_is_b4() {
        assert_eq!(d_element(3, 2, 0).unwrap(), generator(3, 4).unwrap());
        assert_eq!(d_element(3, 1, 1).unwrap(), generator(3, 3).unwrap());
        assert!(d_element(3, 0, 1).is_err());
    }
}
