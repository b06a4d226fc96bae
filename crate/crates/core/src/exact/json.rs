//! Matrix JSON encoding: `{"rows": r, "cols": c, "data": [[entry]]}` where an
//! entry is a JSON integer or a string `"n"` / `"num/den"`. Integers that do
//! not fit in an `i64` are written as strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{IntMatrix, RatMatrix};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Entry>>,
}

fn int_entry(x: &BigInt) -> Entry {
    match x.to_i64() {
        Some(v) => Entry::Int(v),
        None => Entry::Text(x.to_string()),
    }
}

fn rat_entry(x: &BigRational) -> Entry {
    if x.is_integer() {
        int_entry(x.numer())
    } else {
        Entry::Text(format!("{}/{}", x.numer(), x.denom()))
    }
}

fn parse_rational(e: &Entry) -> Result<BigRational, String> {
    match e {
        Entry::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
        Entry::Text(s) => {
            let s = s.trim();
            match s.split_once('/') {
                None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|e| format!("bad entry {s:?}: {e}")),
                Some((n, d)) => {
                    let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
                    let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
                    if d.is_zero() {
                        return Err(format!("zero denominator in {s:?}"));
                    }
                    Ok(BigRational::new(n, d))
                }
            }
        }
    }
}

/// Readers also accept a bare list of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum InputRepr {
    Full(MatrixRepr),
    Rows(Vec<Vec<Entry>>),
}

impl InputRepr {
    fn into_repr(self) -> MatrixRepr {
        match self {
            InputRepr::Full(r) => r,
            InputRepr::Rows(data) => MatrixRepr { rows: data.len(), cols: data.first().map_or(0, Vec::len), data },
        }
    }
}

fn check_shape(repr: &MatrixRepr) -> Result<(), String> {
    if repr.rows == 0 || repr.cols == 0 {
        return Err("matrix dimensions must be positive".into());
    }
    if repr.data.len() != repr.rows || repr.data.iter().any(|r| r.len() != repr.cols) {
        return Err(format!("data does not match declared shape {}x{}", repr.rows, repr.cols));
    }
    Ok(())
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: (0..self.rows()).map(|i| self.row(i).iter().map(int_entry).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = InputRepr::deserialize(d)?.into_repr();
        check_shape(&repr).map_err(D::Error::custom)?;
        let mut data = Vec::with_capacity(repr.rows * repr.cols);
        for e in repr.data.iter().flatten() {
            let q = parse_rational(e).map_err(D::Error::custom)?;
            if !q.is_integer() {
                return Err(D::Error::custom(format!("non-integer entry {q} in integer matrix")));
            }
            data.push(q.to_integer());
        }
        Ok(IntMatrix::from_vec(repr.rows, repr.cols, data))
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: (0..self.rows()).map(|i| self.row(i).iter().map(rat_entry).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = InputRepr::deserialize(d)?.into_repr();
        check_shape(&repr).map_err(D::Error::custom)?;
        let data = repr
            .data
            .iter()
            .flatten()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(RatMatrix::from_vec(repr.rows, repr.cols, data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_matrix_json_shape() {
        let a = IntMatrix::from_i64(&[&[1, -2], &[0, 3]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"data":[[1,-2],[0,3]]}"#);
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), a);
    }

    #[test]
    fn bare_rows_are_accepted() {
        let a: IntMatrix = serde_json::from_str("[[0, 1], [1, 0]]").unwrap();
        assert_eq!(a, IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert!(serde_json::from_str::<IntMatrix>("[[0, 1], [1]]").is_err());
        let q: RatMatrix = serde_json::from_str(r#"[["1/2"]]"#).unwrap();
        assert_eq!(q, RatMatrix::from_i64_fracs(&[&[(1, 2)]]));
    }

    #[test]
    fn rational_entries_use_strings() {
        let a = RatMatrix::from_i64_fracs(&[&[(1, 2), (3, 1)]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"data":[["1/2",3]]}"#);
        assert_eq!(serde_json::from_str::<RatMatrix>(&s).unwrap(), a);
    }

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big = BigInt::from_str("123456789012345678901234567890").unwrap();
        let a = IntMatrix::from_vec(1, 1, vec![big.clone()]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"123456789012345678901234567890\""));
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), a);
    }

    #[test]
    fn rejects_bad_shapes_and_fractions() {
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":2,"cols":1,"data":[[1]]}"#).is_err());
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":1,"cols":1,"data":[["1/2"]]}"#).is_err());
        assert!(serde_json::from_str::<RatMatrix>(r#"{"rows":1,"cols":1,"data":[["1/0"]]}"#).is_err());
        // reducible fractions are normalized
        let r: RatMatrix = serde_json::from_str(r#"{"rows":1,"cols":1,"data":[["2/4"]]}"#).unwrap();
        assert_eq!(r, RatMatrix::from_i64_fracs(&[&[(1, 2)]]));
    }
}
