//! Permutations of `{0, …, deg-1}`, written 1-based in text.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation in one-line form: `self.0[x]` is the image of `x`.
///
/// Products act on the right: `(x)(p * q) = ((x)p)q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm(Vec<u16>);

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;

    fn try_from(one_based: Vec<u32>) -> Result<Self> {
        Perm::from_one_based(&one_based)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Vec<u32> {
        p.0.iter().map(|&x| x as u32 + 1).collect()
    }
}

impl Perm {
    pub fn identity(deg: usize) -> Self {
        Perm((0..deg as u16).collect())
    }

    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x as usize >= images.len() || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    pub fn from_one_based(images: &[u32]) -> Result<Self> {
        let v = images
            .iter()
            .map(|&x| {
                x.checked_sub(1)
                    .map(|y| y as u16)
                    .ok_or_else(|| Error::InvalidPermutation(format!("{images:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(v)
    }

    /// Parses cycle notation such as `(1,2)(3,4,5)` (or with spaces) on `deg` points.
    pub fn from_cycles(deg: usize, text: &str) -> Result<Self> {
        let mut img: Vec<u16> = (0..deg as u16).collect();
        let text = text.trim();
        if text.is_empty() || text == "()" {
            return Ok(Perm(img));
        }
        for cyc in text.split(')') {
            let cyc = cyc.trim();
            if cyc.is_empty() {
                continue;
            }
            let body = cyc
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("bad cycle notation `{text}`")))?;
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&x| x >= 1 && x <= deg)
                        .map(|x| x - 1)
                        .ok_or_else(|| Error::Parse(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            // apply this cycle after the previous ones
            let mut cycle_map: Vec<u16> = (0..deg as u16).collect();
            for (i, &p) in pts.iter().enumerate() {
                cycle_map[p] = pts[(i + 1) % pts.len()] as u16;
            }
            for x in img.iter_mut() {
                *x = cycle_map[*x as usize];
            }
        }
        Perm::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Perm(inv)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut l = 1u64;
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            l = l / crate::presentation::gcd(l, len) * len;
        }
        l
    }

    /// Embeds into a larger degree, shifting the moved points by `offset`.
    pub fn shifted(&self, offset: usize, deg: usize) -> Perm {
        let mut img: Vec<u16> = (0..deg as u16).collect();
        for (i, &x) in self.0.iter().enumerate() {
            img[i + offset] = x + offset as u16;
        }
        Perm(img)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.0[x] as usize;
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_and_cycles_agree() {
        let p = Perm::from_one_based(&[2, 3, 1]).unwrap();
        let q = Perm::from_cycles(3, "(1,2,3)").unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "(1,2,3)");
        assert_eq!(p.order(), 3);
        assert!(Perm::from_one_based(&[1, 1]).is_err());
    }

    #[test]
    fn right_action() {
        let a = Perm::from_cycles(3, "(1,2)").unwrap();
        let b = Perm::from_cycles(3, "(2,3)").unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.mul(&b).apply(0), 2);
        assert!(a.mul(&a.inverse()).is_identity());
        assert_eq!(Perm::from_cycles(4, "(1,2)(3,4)").unwrap().order(), 2);
        let c = Perm::from_cycles(3, "(1,2)(2,3)").unwrap();
        assert_eq!(c, a.mul(&b));
    }
}
