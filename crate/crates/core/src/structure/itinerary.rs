use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A word over {0, 1}: symbol `k` is 0 when the k-th iterate lies in the
/// outer annulus (between A0 and the basin of infinity) and 1 when it lies
/// in the inner annulus (between T0 and A0).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary(Vec<u8>);

impl Itinerary {
    pub fn new() -> Self {
        Itinerary(Vec::new())
    }

    /// `n` zeros: the itinerary of the n-th nested annulus.
    pub fn zeros(n: usize) -> Self {
        Itinerary(vec![0; n])
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "itinerary symbols are 0 or 1");
        Itinerary(bits.to_vec())
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of leading zeros.
    pub fn leading_zeros(&self) -> usize {
        self.0.iter().take_while(|&&b| b == 0).count()
    }

    pub fn is_all_zeros(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    /// Drops the first symbol (the itinerary of the image).
    pub fn shifted(&self) -> Self {
        Itinerary(self.0.iter().skip(1).copied().collect())
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Itinerary {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(format!("invalid itinerary symbol {other:?}")),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Itinerary)
    }
}

impl Serialize for Itinerary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Itinerary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An argument to [`itinerary_order`]: either the nested annulus `A_n`
/// (the all-zero word of length n) or a general word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKey {
    Nested(usize),
    Word(Itinerary),
}

impl From<usize> for OrderKey {
    fn from(n: usize) -> Self {
        OrderKey::Nested(n)
    }
}

impl From<Itinerary> for OrderKey {
    fn from(w: Itinerary) -> Self {
        if w.is_all_zeros() {
            OrderKey::Nested(w.len())
        } else {
            OrderKey::Word(w)
        }
    }
}

impl From<&str> for OrderKey {
    fn from(s: &str) -> Self {
        OrderKey::from(s.parse::<Itinerary>().expect("valid itinerary literal"))
    }
}

/// Outcome of comparing two annuli: `Precedes` means the first is
/// surrounded by the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Precedes,
    Succeeds,
    Incomparable,
}

impl Order {
    fn flip(self) -> Self {
        match self {
            Order::Precedes => Order::Succeeds,
            Order::Succeeds => Order::Precedes,
            Order::Incomparable => Order::Incomparable,
        }
    }
}

/// Where a word with a 1 sits among the nested annuli: strictly between
/// `A_{k-1}` and `A_k` for `k` its number of leading zeros (inside `A_0`
/// when `k = 0`).
fn slot(w: &Itinerary) -> usize {
    w.leading_zeros()
}

/// Compares two annuli by the leading-zero rule: `n < m` orders the nested
/// annuli; a word with `k` leading zeros lies between `A_{k-1}` and `A_k`
/// (inside `A_0` for `k = 0`). Two words are ordered when they fall in
/// different slots; words sharing a slot are not decided by this rule.
pub fn itinerary_order(first: impl Into<OrderKey>, second: impl Into<OrderKey>) -> Order {
    use OrderKey::*;
    match (first.into(), second.into()) {
        (Nested(n), Nested(m)) => match n.cmp(&m) {
            std::cmp::Ordering::Less => Order::Precedes,
            std::cmp::Ordering::Greater => Order::Succeeds,
            std::cmp::Ordering::Equal => Order::Incomparable,
        },
        (Word(w), Nested(m)) => {
            if slot(&w) <= m {
                Order::Precedes
            } else {
                Order::Succeeds
            }
        }
        (Nested(n), Word(w)) => itinerary_order(Word(w), Nested(n)).flip(),
        (Word(u), Word(v)) => match slot(&u).cmp(&slot(&v)) {
            std::cmp::Ordering::Less => Order::Precedes,
            std::cmp::Ordering::Greater => Order::Succeeds,
            std::cmp::Ordering::Equal => Order::Incomparable,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_cases() {
        assert_eq!(itinerary_order("1", 0usize), Order::Precedes);
        assert_eq!(itinerary_order("01", 1usize), Order::Precedes);
        assert_eq!(itinerary_order("01", 0usize), Order::Succeeds);
        assert_eq!(itinerary_order(3usize, 5usize), Order::Precedes);
        assert_eq!(itinerary_order(5usize, 3usize), Order::Succeeds);
    }

    #[test]
    fn words_by_slot() {
        assert_eq!(itinerary_order("1", "01"), Order::Precedes);
        assert_eq!(itinerary_order("0011", "01"), Order::Succeeds);
        assert_eq!(itinerary_order("10", "11"), Order::Incomparable);
        // All-zero words are the nested annuli.
        assert_eq!(itinerary_order("00", 2usize), Order::Incomparable);
        assert_eq!(itinerary_order("00", 3usize), Order::Precedes);
    }

    #[test]
    fn round_trip() {
        let w: Itinerary = "0110".parse().unwrap();
        assert_eq!(w.to_string(), "0110");
        assert_eq!(w.leading_zeros(), 1);
        assert_eq!(w.shifted().to_string(), "110");
        assert!("012".parse::<Itinerary>().is_err());
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "\"0110\"");
    }
}
