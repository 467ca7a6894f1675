//! Token-by-token generators with bounded per-step randomness, and the
//! decider for membership in their support.
//!
//! A machine step sees the prefix emitted so far, an auxiliary state and a
//! reader over random bits. With at most `b` bits per step the reachable
//! auxiliary states after each prefix form a finite set, so support
//! membership is decided by exhaustive branching over `2^b` assignments.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::generate::Generator;
use crate::language::Elem;

/// Cap for [`iterative_bit_discovery`].
pub const DISCOVERY_CAP: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Sym(char),
    Eos,
}

/// A step tried to read past the bits it was given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfBits;

/// Reader over one step's random bits.
#[derive(Debug)]
pub struct RandomBits<'a> {
    bits: &'a [bool],
    read: usize,
}

impl<'a> RandomBits<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        RandomBits { bits, read: 0 }
    }

    pub fn next_bit(&mut self) -> Result<bool, OutOfBits> {
        let b = *self.bits.get(self.read).ok_or(OutOfBits)?;
        self.read += 1;
        Ok(b)
    }

    /// Bits consumed so far.
    pub fn consumed(&self) -> &'a [bool] {
        &self.bits[..self.read]
    }
}

/// A generator that emits one token per step.
pub trait TokenMachine: Send + Sync {
    /// Auxiliary state; `Default` is the initial state.
    type Aux: Clone + Eq + Hash + Default + Debug + Send + Sync;

    /// Output symbols, excluding EOS.
    fn alphabet(&self) -> Vec<char>;

    /// Declared per-step bound on random bits, if known.
    fn bit_bound(&self) -> Option<u32>;

    /// Longest output the machine is exercised on.
    fn max_len(&self) -> usize;

    fn step(&self, prefix: &[Token], aux: &Self::Aux, bits: &mut RandomBits<'_>) -> Result<(Token, Self::Aux), OutOfBits>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecideMode {
    /// The query is a complete output and must be followed by EOS.
    Complete,
    /// The query only needs to be a prefix of some output.
    Prefix,
}

/// Outcome of [`mop_decide`]. A witness lists the bits consumed per step,
/// including the final EOS step in complete mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportVerdict {
    pub answer: bool,
    pub witness: Option<Vec<Vec<bool>>>,
}

pub fn tokens(s: &str) -> Vec<Token> {
    s.chars().map(Token::Sym).collect()
}

pub fn render(tokens: &[Token]) -> String {
    tokens
        .iter()
        .filter_map(|t| match t {
            Token::Sym(c) => Some(*c),
            Token::Eos => None,
        })
        .collect()
}

fn assignments(k: u32) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << k).map(move |a| (0..k).map(|b| a >> b & 1 == 1).collect())
}

type Branch<A> = (Token, A, Vec<bool>);

/// All distinct outcomes of one step: `(token, next aux, bits consumed)`.
fn branches<M: TokenMachine>(machine: &M, prefix: &[Token], aux: &M::Aux) -> Result<Vec<Branch<M::Aux>>> {
    let bound = match machine.bit_bound() {
        Some(b) => b,
        None => iterative_bit_discovery(machine, prefix, aux)?,
    };
    let mut out: Vec<Branch<M::Aux>> = Vec::new();
    for bits in assignments(bound) {
        let mut reader = RandomBits::new(&bits);
        let (tok, next) = machine
            .step(prefix, aux, &mut reader)
            .map_err(|_| Error::BitBoundExceeded { bound })?;
        let used = reader.consumed().to_vec();
        if !out.iter().any(|(t, a, u)| *t == tok && *a == next && *u == used) {
            out.push((tok, next, used));
        }
    }
    Ok(out)
}

/// Smallest `k` such that every assignment of `k` bits completes the step.
pub fn iterative_bit_discovery<M: TokenMachine>(machine: &M, prefix: &[Token], aux: &M::Aux) -> Result<u32> {
    for k in 0..=DISCOVERY_CAP {
        if assignments(k).all(|bits| machine.step(prefix, aux, &mut RandomBits::new(&bits)).is_ok()) {
            return Ok(k);
        }
    }
    Err(Error::DiscoveryCap(DISCOVERY_CAP))
}

/// Decides whether `s` is in the support of `machine` (or a prefix of a
/// support element in [`DecideMode::Prefix`]).
pub fn mop_decide<M: TokenMachine>(machine: &M, s: &str, mode: DecideMode) -> Result<SupportVerdict> {
    let mut target = tokens(s);
    if mode == DecideMode::Complete {
        target.push(Token::Eos);
    }
    let no = SupportVerdict {
        answer: false,
        witness: None,
    };
    // reachable aux state ↦ one witness reaching it
    let mut frontier: HashMap<M::Aux, Vec<Vec<bool>>> = HashMap::from([(M::Aux::default(), Vec::new())]);
    for (pos, &want) in target.iter().enumerate() {
        let prefix = &target[..pos];
        let mut next: HashMap<M::Aux, Vec<Vec<bool>>> = HashMap::new();
        for (aux, witness) in &frontier {
            for (tok, aux2, used) in branches(machine, prefix, aux)? {
                if tok == want && !next.contains_key(&aux2) {
                    let mut w = witness.clone();
                    w.push(used);
                    next.insert(aux2, w);
                }
            }
        }
        if next.is_empty() {
            return Ok(no);
        }
        frontier = next;
    }
    let witness = frontier.into_values().min().expect("non-empty frontier");
    Ok(SupportVerdict {
        answer: true,
        witness: Some(witness),
    })
}

/// Runs the machine on per-step witness bits, stopping at EOS or when the
/// witness runs out.
pub fn replay<M: TokenMachine>(machine: &M, witness: &[Vec<bool>]) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut aux = M::Aux::default();
    for bits in witness {
        let (tok, next) = machine
            .step(&out, &aux, &mut RandomBits::new(bits))
            .map_err(|_| Error::BitBoundExceeded {
                bound: bits.len() as u32,
            })?;
        out.push(tok);
        aux = next;
        if tok == Token::Eos {
            break;
        }
    }
    Ok(out)
}

/// Every complete output of length `≤ max_len`, by exhaustive branching.
pub fn support_bruteforce<M: TokenMachine>(machine: &M, max_len: usize) -> Result<BTreeSet<String>> {
    let mut found = BTreeSet::new();
    let mut stack = vec![(Vec::<Token>::new(), M::Aux::default())];
    let mut visited = std::collections::HashSet::new();
    while let Some((prefix, aux)) = stack.pop() {
        if !visited.insert((prefix.clone(), aux.clone())) {
            continue;
        }
        for (tok, aux2, _) in branches(machine, &prefix, &aux)? {
            match tok {
                Token::Eos => {
                    found.insert(render(&prefix));
                }
                Token::Sym(_) if prefix.len() < max_len => {
                    let mut p = prefix.clone();
                    p.push(tok);
                    stack.push((p, aux2));
                }
                Token::Sym(_) => {}
            }
        }
    }
    Ok(found)
}

/// Emits 'a' then EOS.
#[derive(Clone, Copy, Debug, Default)]
pub struct DetA;

impl TokenMachine for DetA {
    type Aux = u32;

    fn alphabet(&self) -> Vec<char> {
        vec!['a', 'b']
    }

    fn bit_bound(&self) -> Option<u32> {
        Some(0)
    }

    fn max_len(&self) -> usize {
        5
    }

    fn step(&self, _: &[Token], aux: &u32, _: &mut RandomBits<'_>) -> Result<(Token, u32), OutOfBits> {
        Ok((if *aux == 0 { Token::Sym('a') } else { Token::Eos }, aux + 1))
    }
}

/// Emits 'a' or 'b' on one fair bit, then EOS.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoinAb;

impl TokenMachine for CoinAb {
    type Aux = u32;

    fn alphabet(&self) -> Vec<char> {
        vec!['a', 'b']
    }

    fn bit_bound(&self) -> Option<u32> {
        Some(1)
    }

    fn max_len(&self) -> usize {
        5
    }

    fn step(&self, _: &[Token], aux: &u32, bits: &mut RandomBits<'_>) -> Result<(Token, u32), OutOfBits> {
        if *aux > 0 {
            return Ok((Token::Eos, aux + 1));
        }
        let tok = if bits.next_bit()? { 'b' } else { 'a' };
        Ok((Token::Sym(tok), aux + 1))
    }
}

/// Emits a uniform string of length exactly 2 over {a, b}.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformLen2;

impl TokenMachine for UniformLen2 {
    type Aux = u32;

    fn alphabet(&self) -> Vec<char> {
        vec!['a', 'b']
    }

    fn bit_bound(&self) -> Option<u32> {
        Some(1)
    }

    fn max_len(&self) -> usize {
        5
    }

    fn step(&self, _: &[Token], aux: &u32, bits: &mut RandomBits<'_>) -> Result<(Token, u32), OutOfBits> {
        if *aux >= 2 {
            return Ok((Token::Eos, aux + 1));
        }
        let tok = if bits.next_bit()? { 'b' } else { 'a' };
        Ok((Token::Sym(tok), aux + 1))
    }
}

/// Reads bits until the first 1, then emits `a`. No finite per-step bound
/// exists.
#[derive(Clone, Copy, Debug, Default)]
pub struct GeometricMachine;

impl TokenMachine for GeometricMachine {
    type Aux = bool;

    fn alphabet(&self) -> Vec<char> {
        vec!['a']
    }

    fn bit_bound(&self) -> Option<u32> {
        None
    }

    fn max_len(&self) -> usize {
        1
    }

    fn step(&self, _: &[Token], done: &bool, bits: &mut RandomBits<'_>) -> Result<(Token, bool), OutOfBits> {
        if *done {
            return Ok((Token::Eos, true));
        }
        while !bits.next_bit()? {}
        Ok((Token::Sym('a'), true))
    }
}

/// Hides the declared bound of a machine, forcing discovery.
#[derive(Clone, Copy, Debug, Default)]
pub struct Undeclared<M>(pub M);

impl<M: TokenMachine> TokenMachine for Undeclared<M> {
    type Aux = M::Aux;

    fn alphabet(&self) -> Vec<char> {
        self.0.alphabet()
    }

    fn bit_bound(&self) -> Option<u32> {
        None
    }

    fn max_len(&self) -> usize {
        self.0.max_len()
    }

    fn step(&self, prefix: &[Token], aux: &M::Aux, bits: &mut RandomBits<'_>) -> Result<(Token, M::Aux), OutOfBits> {
        self.0.step(prefix, aux, bits)
    }
}

/// The shipped machines by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureMachine {
    DetA,
    CoinAb,
    UniformLen2,
}

pub const MACHINE_NAMES: &[&str] = &["det-a", "coin-ab", "uniform-len2"];

impl FixtureMachine {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "det-a" => Ok(FixtureMachine::DetA),
            "coin-ab" => Ok(FixtureMachine::CoinAb),
            "uniform-len2" => Ok(FixtureMachine::UniformLen2),
            _ => Err(Error::Config(format!(
                "unknown machine `{name}`; valid: {}",
                MACHINE_NAMES.join(", ")
            ))),
        }
    }

    pub fn all() -> [FixtureMachine; 3] {
        [FixtureMachine::DetA, FixtureMachine::CoinAb, FixtureMachine::UniformLen2]
    }
}

impl TokenMachine for FixtureMachine {
    type Aux = u32;

    fn alphabet(&self) -> Vec<char> {
        vec!['a', 'b']
    }

    fn bit_bound(&self) -> Option<u32> {
        match self {
            FixtureMachine::DetA => DetA.bit_bound(),
            FixtureMachine::CoinAb => CoinAb.bit_bound(),
            FixtureMachine::UniformLen2 => UniformLen2.bit_bound(),
        }
    }

    fn max_len(&self) -> usize {
        5
    }

    fn step(&self, prefix: &[Token], aux: &u32, bits: &mut RandomBits<'_>) -> Result<(Token, u32), OutOfBits> {
        match self {
            FixtureMachine::DetA => DetA.step(prefix, aux, bits),
            FixtureMachine::CoinAb => CoinAb.step(prefix, aux, bits),
            FixtureMachine::UniformLen2 => UniformLen2.step(prefix, aux, bits),
        }
    }
}

/// Length-then-lexicographic rank of `s` over `alphabet`, with the empty
/// string at 1.
pub fn string_to_elem(alphabet: &[char], s: &str) -> Option<Elem> {
    let k = alphabet.len() as u64;
    let mut offset = 1u64;
    let mut power = 1u64;
    let len = s.chars().count();
    for _ in 0..len {
        offset = offset.checked_add(power)?;
        power = power.checked_mul(k)?;
    }
    let mut rank = 0u64;
    for c in s.chars() {
        let d = alphabet.iter().position(|&a| a == c)? as u64;
        rank = rank.checked_mul(k)?.checked_add(d)?;
    }
    Some(Elem::new(offset.checked_add(rank)?))
}

pub fn elem_to_string(alphabet: &[char], x: Elem) -> String {
    let k = alphabet.len() as u64;
    let mut rest = x.index() - 1;
    let mut len = 0u32;
    let mut block = 1u64;
    while rest >= block {
        rest -= block;
        block *= k;
        len += 1;
    }
    let mut chars = vec![alphabet[0]; len as usize];
    for slot in chars.iter_mut().rev() {
        *slot = alphabet[(rest % k) as usize];
        rest /= k;
    }
    chars.into_iter().collect()
}

/// Runs one sampled output, drawing fresh bits per step.
pub fn sample_output<M: TokenMachine>(machine: &M, rng: &mut dyn RngCore) -> Result<String> {
    let mut out = Vec::new();
    let mut aux = M::Aux::default();
    loop {
        let words = [rng.next_u64()];
        let bits: Vec<bool> = (0..64).map(|b| words[0] >> b & 1 == 1).collect();
        let bound = machine.bit_bound().unwrap_or(64) as usize;
        let (tok, next) = machine
            .step(&out, &aux, &mut RandomBits::new(&bits[..bound.min(64)]))
            .map_err(|_| Error::BitBoundExceeded { bound: bound as u32 })?;
        if tok == Token::Eos {
            return Ok(render(&out));
        }
        out.push(tok);
        aux = next;
        if out.len() > machine.max_len() {
            return Err(Error::IterationCap {
                cap: machine.max_len(),
                context: "token machine output length",
            });
        }
    }
}

/// Views a machine as a generator over the canonical domain through the
/// shortlex bijection; support membership goes through [`mop_decide`].
pub fn machine_generator<M: TokenMachine + 'static>(machine: M) -> Generator {
    let machine = Arc::new(machine);
    let alphabet = machine.alphabet();
    let m2 = machine.clone();
    let a2 = alphabet.clone();
    Generator::new(
        "token-machine",
        move |rng| {
            let s = sample_output(&*machine, rng)?;
            string_to_elem(&alphabet, &s).ok_or_else(|| Error::Config(format!("`{s}` outside the alphabet")))
        },
        move |x| {
            let s = elem_to_string(&a2, x);
            mop_decide(&*m2, &s, DecideMode::Complete).is_ok_and(|v| v.answer)
        },
    )
}
