//! LZ78 phrase division of binary strings.
//!
//! A string is scanned once, left to right, and greedily divided into
//! phrases: each phrase is the longest already-known phrase (starting from
//! the empty phrase) extended by the next symbol, and every completed phrase
//! is added to the dictionary. When the input ends in the middle of a match,
//! the leftover symbols form one final phrase even though they duplicate a
//! known phrase. The complexity of a string is its phrase count.
//!
//! [`LzDictionary`] keeps the known phrases in a binary trie so each input
//! symbol costs one node hop; [`naive`] holds a deliberately slow reference
//! parser used as an independent oracle in tests.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Error for inputs containing anything but `'0'` and `'1'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz78Error {
    /// Byte offset of the offending character.
    pub offset: usize,
    /// The offending byte.
    pub byte: u8,
}

impl fmt::Display for Lz78Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid symbol {:?} at byte {}: expected '0' or '1'",
            self.byte as char, self.offset
        )
    }
}

impl core::error::Error for Lz78Error {}

/// The result of dividing a string into LZ78 phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseList {
    phrases: Vec<String>,
}

impl PhraseList {
    pub(crate) fn new(phrases: Vec<String>) -> Self {
        Self { phrases }
    }

    /// The phrases in input order.
    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    /// The phrase count, i.e. the LZ complexity of the input.
    pub fn count(&self) -> usize {
        self.phrases.len()
    }

    /// The phrases joined back together; always equals the parsed input.
    pub fn concatenated(&self) -> String {
        self.phrases.concat()
    }
}

const NO_CHILD: u32 = u32::MAX;

/// Trie of known phrases over the binary alphabet.
///
/// Node 0 is the empty phrase; every other node extends its parent by one
/// symbol, so each root-to-node path spells one known phrase and the node
/// index doubles as the phrase index.
#[derive(Debug, Clone)]
pub struct LzDictionary {
    children: Vec<[u32; 2]>,
}

impl LzDictionary {
    pub fn new() -> Self {
        Self {
            children: alloc::vec![[NO_CHILD; 2]],
        }
    }

    /// The node extending `node` by `symbol`, if that phrase is known.
    pub fn child(&self, node: u32, symbol: bool) -> Option<u32> {
        let c = self.children[node as usize][symbol as usize];
        (c != NO_CHILD).then_some(c)
    }

    fn add(&mut self, node: u32, symbol: bool) -> u32 {
        let new = self.children.len() as u32;
        self.children.push([NO_CHILD; 2]);
        self.children[node as usize][symbol as usize] = new;
        new
    }

    /// Total nodes including the empty-phrase root.
    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    /// Number of known (completed) phrases; always `node_count() - 1`.
    pub fn known_phrase_count(&self) -> usize {
        self.children.len() - 1
    }

    /// Parses `bits` from scratch, returning the dictionary it built and the
    /// phrase count (including a final unextended phrase when the input ends
    /// mid-match).
    pub fn parse_bits<I>(bits: I) -> (Self, usize)
    where
        I: IntoIterator<Item = bool>,
    {
        let mut dict = Self::new();
        let mut node = 0u32;
        let mut count = 0usize;
        for bit in bits {
            match dict.child(node, bit) {
                Some(next) => node = next,
                None => {
                    dict.add(node, bit);
                    count += 1;
                    node = 0;
                }
            }
        }
        if node != 0 {
            count += 1;
        }
        (dict, count)
    }
}

impl Default for LzDictionary {
    fn default() -> Self {
        Self::new()
    }
}

/// Phrase count of a binary sequence given directly as bits.
pub fn phrase_count_bits<I>(bits: I) -> usize
where
    I: IntoIterator<Item = bool>,
{
    LzDictionary::parse_bits(bits).1
}

fn validate_symbol(i: usize, b: u8) -> Result<bool, Lz78Error> {
    match b {
        b'0' => Ok(false),
        b'1' => Ok(true),
        _ => Err(Lz78Error { offset: i, byte: b }),
    }
}

/// Divides `input` into LZ78 phrases.
pub fn lz78_parse(input: &str) -> Result<PhraseList, Lz78Error> {
    let bytes = input.as_bytes();
    let mut dict = LzDictionary::new();
    let mut node = 0u32;
    let mut phrase_start = 0usize;
    let mut phrases = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        let sym = validate_symbol(i, b)?;
        match dict.child(node, sym) {
            Some(next) => node = next,
            None => {
                dict.add(node, sym);
                phrases.push(input[phrase_start..=i].to_string());
                phrase_start = i + 1;
                node = 0;
            }
        }
    }
    if phrase_start < bytes.len() {
        phrases.push(input[phrase_start..].to_string());
    }
    Ok(PhraseList::new(phrases))
}

/// Phrase count of `input` without materializing the phrases.
pub fn lz78_phrase_count(input: &str) -> Result<usize, Lz78Error> {
    let mut dict = LzDictionary::new();
    let mut node = 0u32;
    let mut count = 0usize;
    for (i, &b) in input.as_bytes().iter().enumerate() {
        let sym = validate_symbol(i, b)?;
        match dict.child(node, sym) {
            Some(next) => node = next,
            None => {
                dict.add(node, sym);
                count += 1;
                node = 0;
            }
        }
    }
    if node != 0 {
        count += 1;
    }
    Ok(count)
}

pub mod naive {
    //! Deliberately naive reference parser.
    //!
    //! Implements the phrase division literally: at each position it scans
    //! the whole dictionary for the longest known phrase prefixing the rest
    //! of the input, then extends it by one symbol. Quadratic and
    //! allocation-happy on purpose; it shares no code with the trie parser
    //! and exists to check it.

    use super::{Lz78Error, PhraseList};
    use alloc::string::ToString;
    use alloc::vec::Vec;

    /// Divides `input` into LZ78 phrases by exhaustive longest-match search.
    pub fn parse(input: &str) -> Result<PhraseList, Lz78Error> {
        for (i, &b) in input.as_bytes().iter().enumerate() {
            if b != b'0' && b != b'1' {
                return Err(Lz78Error { offset: i, byte: b });
            }
        }
        let mut dict: Vec<&str> = Vec::new();
        let mut phrases = Vec::new();
        let mut k = 0usize;
        while k < input.len() {
            let rest = &input[k..];
            let mut longest = 0usize;
            for w in &dict {
                if w.len() > longest && rest.starts_with(w) {
                    longest = w.len();
                }
            }
            let end = k + (longest + 1).min(rest.len());
            let phrase = &input[k..end];
            if phrase.len() == longest + 1 {
                dict.push(phrase);
            }
            phrases.push(phrase.to_string());
            k = end;
        }
        Ok(PhraseList::new(phrases))
    }

    /// Phrase count via [`parse`].
    pub fn phrase_count(input: &str) -> Result<usize, Lz78Error> {
        Ok(parse(input)?.count())
    }
}
