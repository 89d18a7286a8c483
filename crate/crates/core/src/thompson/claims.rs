//! Step-by-step verification that `b1..b4` generate `V_n`.
//!
//! Every step of the generation argument is checked as an exact identity
//! between a synthesized word and an independently built tree pair.

use serde::Serialize;

use super::address::{complete_leaves, Address};
use super::element::VnElement;
use super::gens::{d_element, generator, pull_up, pull_up2};
use super::synth::Synthesizer;
use crate::error::Result;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClaimBounds {
    pub max_k: usize,
    pub max_m: usize,
    pub max_p: usize,
    pub max_address_len: usize,
    /// Words up to this length are also evaluated letter by letter.
    pub flat_check_len: u64,
}

impl Default for ClaimBounds {
    fn default() -> Self {
        ClaimBounds {
            max_k: 3,
            max_m: 4,
            max_p: 3,
            max_address_len: 3,
            flat_check_len: 400,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub cases: usize,
    pub flat_checked: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClaimCheck {
    fn new(name: &'static str, statement: &'static str) -> Self {
        ClaimCheck {
            name,
            statement,
            cases: 0,
            flat_checked: 0,
            failures: Vec::new(),
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub n: u8,
    pub bounds: ClaimBounds,
    pub checks: Vec<ClaimCheck>,
    pub passed: bool,
}

struct Checker<'a> {
    synth: &'a Synthesizer,
    flat_len: u64,
}

impl Checker<'_> {
    fn expect(
        &self,
        check: &mut ClaimCheck,
        label: impl FnOnce() -> String,
        word: &super::words::GenWord,
        oracle: &VnElement,
    ) -> Result<()> {
        check.cases += 1;
        let value = word.evaluate()?;
        if &value != oracle {
            check.failures.push(format!("{}: got {value}, want {oracle}", label()));
            return Ok(());
        }
        if word.len() <= self.flat_len {
            check.flat_checked += 1;
            if &word.evaluate_flat(self.flat_len)? != oracle {
                check
                    .failures
                    .push(format!("{}: flat evaluation disagrees", label()));
            }
        }
        Ok(())
    }
}

fn transposition_perm(size: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..size).collect();
    p.swap(i, j);
    p
}

/// Runs every step for arity `n >= 3`.
pub fn verify_generation(n: u8, bounds: ClaimBounds) -> Result<ClaimReport> {
    let synth = Synthesizer::new(n)?;
    let ck = Checker {
        synth: &synth,
        flat_len: bounds.flat_check_len,
    };
    let nn = n as usize;
    let mut checks = Vec::new();

    let mut c = ClaimCheck::new(
        "top-level symmetric group",
        "Sym(Lea(τ̄_1)) ≤ H via the lift b'(ij) = b(i)j",
    );
    for i in 0..nn {
        for j in i + 1..nn {
            let perm = transposition_perm(nn, i, j);
            let oracle = VnElement::sym(n, 1, &perm)?;
            let lifted: Vec<usize> = (0..nn * nn).map(|x| perm[x / nn] * nn + x % nn).collect();
            c.cases += 1;
            if VnElement::sym(n, 2, &lifted)? != oracle {
                c.failures.push(format!("lift of ({i} {j}) does not collapse"));
            }
            let w = ck.synth.sym_word(1, &perm)?;
            ck.expect(&mut c, || format!("({i} {j})"), &w, &oracle)?;
        }
    }
    checks.push(c);

    let mut c = ClaimCheck::new("pull-up", "b↑ = b4 ∘ (0 1) ∘ (10 11) lies in H");
    let up = pull_up(n)?;
    let swap01 = VnElement::sym(n, 1, &transposition_perm(nn, 0, 1))?;
    let swap1011 = VnElement::transposition(n, &Address::new(&[1, 0]), &Address::new(&[1, 1]))?;
    let product = generator(n, 4)?.compose(&swap01)?.compose(&swap1011)?;
    c.cases += 1;
    if product != up {
        c.failures.push("three-factor product differs from b↑".into());
    }
    ck.expect(&mut c, || "b↑ word".into(), &synth.up_word()?, &up)?;
    checks.push(c);

    let mut c = ClaimCheck::new(
        "symmetric groups at every depth",
        "Sym(Lea(τ̄_k)) ≤ H, checked on all leaf transpositions",
    );
    let mut deepest = 0;
    for k in 0..=bounds.max_k {
        let leaves = complete_leaves(n, k);
        if k == 2 {
            // a few whole permutations through the bubble-sort path
            let size = leaves.len();
            let perms: Vec<Vec<usize>> = vec![
                (0..size).rev().collect(),
                (0..size).map(|x| (x + 1) % size).collect(),
                (0..size).map(|x| (2 * x + 3) % size).collect(),
            ];
            for perm in perms {
                if !is_perm(&perm) {
                    continue;
                }
                let oracle = VnElement::sym(n, 2, &perm)?;
                let w = synth.sym_word(2, &perm)?;
                ck.expect(&mut c, || format!("depth-2 permutation {perm:?}"), &w, &oracle)?;
            }
        }
        for x in 0..leaves.len() {
            for y in x + 1..leaves.len() {
                let oracle = VnElement::transposition(n, &leaves[x], &leaves[y])?;
                let w = synth.transposition_word(&leaves[x], &leaves[y])?;
                ck.expect(
                    &mut c,
                    || format!("({} {})", leaves[x], leaves[y]),
                    &w,
                    &oracle,
                )?;
                deepest = deepest.max(w.len());
            }
        }
    }
    c.note = Some(format!("longest transposition word has {deepest} letters"));
    checks.push(c);

    let mut c = ClaimCheck::new(
        "second pull-up",
        "b↑↑ = (c b4 c) ∘ (0 2) ∘ (20 22) lies in H, c = (1 2)",
    );
    let up2 = pull_up2(n)?;
    let swap12 = VnElement::sym(n, 1, &transposition_perm(nn, 1, 2))?;
    let cb4c = swap12.compose(&generator(n, 4)?)?.compose(&swap12)?;
    c.cases += 1;
    if cb4c != VnElement::transposition(n, &Address::new(&[0, 0]), &Address::new(&[2]))? {
        c.failures.push("c b4 c is not the swap of 00 and 2".into());
    }
    ck.expect(&mut c, || "b↑↑ word".into(), &synth.up2_word()?, &up2)?;
    checks.push(c);

    let mut c = ClaimCheck::new(
        "d_m",
        "the swap of 0^m and 1 lies in H; d_m = (b↑↑)^{m-2} b4 (b↑↑)^{2-m} for m ≥ 3",
    );
    for m in 1..=bounds.max_m {
        let oracle = d_element(n, m, 0)?;
        if m >= 3 {
            let e = up2.pow(m as i64 - 2);
            let formula = e.compose(&generator(n, 4)?)?.compose(&e.invert())?;
            c.cases += 1;
            if formula != oracle {
                c.failures.push(format!("conjugation formula fails at m = {m}"));
            }
        }
        ck.expect(&mut c, || format!("m = {m}"), &synth.d_word(m, 0)?, &oracle)?;
    }
    checks.push(c);

    let mut c = ClaimCheck::new("d_{m,p}", "the swap of 0^{p+m} and 0^p1 lies in H");
    let mut literal_mismatch = Vec::new();
    for m in 1..=bounds.max_m {
        for p in 0..=bounds.max_p {
            let oracle = d_element(n, m, p)?;
            ck.expect(
                &mut c,
                || format!("m = {m}, p = {p}"),
                &synth.d_word(m, p)?,
                &oracle,
            )?;
            let literal = up.pow(p as i64);
            let literal = literal
                .compose(&d_element(n, m, 0)?)?
                .compose(&literal.invert())?;
            if literal != oracle {
                literal_mismatch.push(format!("({m},{p})"));
            }
        }
    }
    c.note = Some(if literal_mismatch.is_empty() {
        "(b↑)^p d_m (b↑)^{-p} = d_{m,p} for all tested parameters".into()
    } else {
        format!(
            "(b↑)^p d_m (b↑)^{{-p}} differs from d_{{m,p}} at {}; the word conjugates d_{{m+1}} by (b↑)^p (10 11) (b↑)^{{-1}} instead",
            literal_mismatch.join(" ")
        )
    });
    checks.push(c);

    let mut c = ClaimCheck::new(
        "general transpositions",
        "the swap of any two incomparable addresses lies in H",
    );
    let addrs: Vec<Address> = (1..=bounds.max_address_len)
        .flat_map(|l| complete_leaves(n, l))
        .collect();
    for (x, ax) in addrs.iter().enumerate() {
        for ay in &addrs[x + 1..] {
            if ax.comparable(ay) {
                continue;
            }
            let oracle = VnElement::transposition(n, ax, ay)?;
            let w = synth.transposition_word(ax, ay)?;
            ck.expect(&mut c, || format!("({ax} {ay})"), &w, &oracle)?;
        }
    }
    checks.push(c);

    let passed = checks.iter().all(|c| c.passed());
    Ok(ClaimReport {
        n,
        bounds,
        checks,
        passed,
    })
}

fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}
