use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One class entry of a fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FingerprintEntry {
    pub trace: BigRational,
    pub order: u64,
    pub class_size: u64,
}

/// Sorted multiset of (trace, element order, class size) over the conjugacy
/// classes of a finite matrix group. Equal fingerprints are necessary for
/// conjugacy over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterFingerprint {
    entries: Vec<FingerprintEntry>,
}

impl CharacterFingerprint {
    pub fn new(mut entries: Vec<FingerprintEntry>) -> Self {
        entries.sort();
        CharacterFingerprint { entries }
    }

    pub fn entries(&self) -> &[FingerprintEntry] {
        &self.entries
    }

    pub fn group_order(&self) -> u64 {
        self.entries.iter().map(|e| e.class_size).sum()
    }

    /// Entries as `(trace, order, class size)` with integral traces, for
    /// groups over Z.
    pub fn as_integer_triples(&self) -> Option<Vec<(i64, u64, u64)>> {
        self.entries
            .iter()
            .map(|e| {
                let t = e.trace.is_integer().then(|| e.trace.to_integer())?;
                Some((i64::try_from(t).ok()?, e.order, e.class_size))
            })
            .collect()
    }

    pub fn from_integer_triples(triples: &[(i64, u64, u64)]) -> Self {
        CharacterFingerprint::new(
            triples
                .iter()
                .map(|&(t, order, class_size)| FingerprintEntry {
                    trace: BigRational::from_integer(BigInt::from(t)),
                    order,
                    class_size,
                })
                .collect(),
        )
    }
}

fn trace_string(t: &BigRational) -> String {
    if t.is_integer() { t.numer().to_string() } else { format!("{}/{}", t.numer(), t.denom()) }
}

impl std::fmt::Display for CharacterFingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {}, {})", trace_string(&e.trace), e.order, e.class_size)?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    trace: String,
    order: u64,
    class_size: u64,
}

impl Serialize for CharacterFingerprint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries
            .iter()
            .map(|e| EntryRepr { trace: trace_string(&e.trace), order: e.order, class_size: e.class_size })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharacterFingerprint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let reprs = Vec::<EntryRepr>::deserialize(d)?;
        let mut entries = Vec::with_capacity(reprs.len());
        for r in reprs {
            let trace = r.trace.parse::<BigRational>().map_err(|e| D::Error::custom(format!("bad trace: {e}")))?;
            entries.push(FingerprintEntry { trace, order: r.order, class_size: r.class_size });
        }
        Ok(CharacterFingerprint::new(entries))
    }
}
