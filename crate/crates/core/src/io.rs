//! Text formats: ray-sequence CSV, the file-backed oracle CSV, and ray
//! expressions such as `e1+2*e3` or `[0,1,-1]`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{HClass, Lattice};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::recovery::TableOracle;

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// `d,c_d` rows.
pub fn write_ray_sequence_csv(values: &[Rational]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "c_d"]).map_err(csv_err)?;
    for (d, v) in values.iter().enumerate() {
        w.write_record([d.to_string(), format_rational(v)]).map_err(csv_err)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Reads `d,c_d` rows; every degree from 0 to the maximum must be present.
pub fn parse_ray_sequence_csv(text: &str) -> Result<Vec<Rational>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut slots: Vec<Option<Rational>> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() < 2 {
            return Err(Error::Format(format!("expected `d,c_d`, got {} fields", rec.len())));
        }
        let d: usize = rec[0]
            .parse()
            .map_err(|_| Error::Format(format!("bad degree `{}`", &rec[0])))?;
        if slots.len() <= d {
            slots.resize(d + 1, None);
        }
        slots[d] = Some(parse_rational(&rec[1])?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(d, v)| v.ok_or_else(|| Error::Format(format!("missing degree {d}"))))
        .collect()
}

/// Oracle rows `s1,…,sn,d,q_d`, grouped by ray in the given order.
pub fn write_oracle_csv(rank: usize, rows: &[(HClass, Vec<Rational>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=rank).map(|i| format!("s{i}")).collect();
    header.push("d".into());
    header.push("q_d".into());
    w.write_record(&header).map_err(csv_err)?;
    for (s, q) in rows {
        check_dim(rank, s.len())?;
        for (d, v) in q.iter().enumerate() {
            let mut rec: Vec<String> = s.0.iter().map(BigInt::to_string).collect();
            rec.push(d.to_string());
            rec.push(format_rational(v));
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Oracle rows grouped by ray, in order of first appearance. Entry `d` of
/// each vector holds `q_d(S)` when the file provides it.
pub fn parse_oracle_rows(text: &str, rank: usize) -> Result<Vec<(HClass, Vec<Option<Rational>>)>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let width = rank + 2;
    let mut rows: Vec<(HClass, Vec<Option<Rational>>)> = Vec::new();
    let mut index: HashMap<HClass, usize> = HashMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != width {
            return Err(Error::Format(format!(
                "row {}: expected {width} fields (rank {rank} + d + q_d), got {}",
                line + 1,
                rec.len()
            )));
        }
        let coords = (0..rank)
            .map(|i| {
                rec[i]
                    .parse::<BigInt>()
                    .map_err(|_| Error::Format(format!("row {}: bad coordinate `{}`", line + 1, &rec[i])))
            })
            .collect::<Result<Vec<_>>>()?;
        let d: usize = rec[rank]
            .parse()
            .map_err(|_| Error::Format(format!("row {}: bad degree", line + 1)))?;
        let value = parse_rational(&rec[rank + 1])?;
        let s = HClass(coords);
        let slot = *index.entry(s.clone()).or_insert_with(|| {
            rows.push((s, Vec::new()));
            rows.len() - 1
        });
        let values = &mut rows[slot].1;
        if values.len() <= d {
            values.resize(d + 1, None);
        }
        values[d] = Some(value);
    }
    Ok(rows)
}

pub fn parse_oracle_csv(text: &str, lattice: &Lattice) -> Result<TableOracle> {
    let mut oracle = TableOracle::new(lattice.clone());
    for (s, values) in parse_oracle_rows(text, lattice.rank)? {
        for (d, v) in values.into_iter().enumerate() {
            if let Some(v) = v {
                oracle.insert(s.clone(), d, v);
            }
        }
    }
    Ok(oracle)
}

/// Parses `"e1+2*e3"` (1-based basis symbols, integer coefficients) or a
/// bracketed integer vector `"[0,1,-1]"`.
pub fn parse_ray(expr: &str, rank: usize) -> Result<HClass> {
    let trimmed = expr.trim_start();
    let offset = expr.len() - trimmed.len();
    if trimmed.starts_with('[') {
        return parse_vector(trimmed, offset, rank);
    }
    RayParser {
        chars: expr.char_indices().collect(),
        pos: 0,
        rank,
    }
    .parse()
}

fn parse_vector(text: &str, offset: usize, rank: usize) -> Result<HClass> {
    let t = text.trim_end();
    let inner = t.strip_suffix(']').ok_or(Error::Parse {
        pos: offset + t.len(),
        msg: "missing closing `]`".into(),
    })?;
    let inner = &inner[1..];
    let mut coords = Vec::new();
    let mut pos = offset + 1;
    if !inner.trim().is_empty() {
        for part in inner.split(',') {
            let v: BigInt = part.trim().parse().map_err(|_| Error::Parse {
                pos: pos + (part.len() - part.trim_start().len()),
                msg: format!("`{}` is not an integer", part.trim()),
            })?;
            coords.push(v);
            pos += part.len() + 1;
        }
    }
    check_dim(rank, coords.len())?;
    Ok(HClass(coords))
}

struct RayParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    rank: usize,
}

impl RayParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse().ok()
    }

    fn parse(mut self) -> Result<HClass> {
        let mut coords = vec![BigInt::from(0); self.rank];
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return self.err("empty ray expression");
                }
                break;
            }
            let mut sign = BigInt::from(1);
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = BigInt::from(-1);
                    self.pos += 1;
                }
                _ if !first => return self.err("expected `+` or `-`"),
                _ => {}
            }
            self.skip_ws();
            let coeff = match self.digits() {
                Some(c) => {
                    self.skip_ws();
                    match self.peek() {
                        Some('*') => {
                            self.pos += 1;
                            self.skip_ws();
                        }
                        Some('e') => {}
                        Some('.') | Some('/') => return self.err("coefficients must be integers"),
                        _ => return self.err("expected `*` followed by a basis symbol"),
                    }
                    c
                }
                None => BigInt::from(1),
            };
            if self.peek() != Some('e') {
                return self.err("expected a basis symbol `e<i>`");
            }
            self.pos += 1;
            let at = self.offset();
            let Some(index) = self.digits() else {
                return self.err("expected a basis index after `e`");
            };
            let i: usize = (&index).try_into().unwrap_or(0);
            if i == 0 || i > self.rank {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("basis index e{index} outside 1..={}", self.rank),
                });
            }
            coords[i - 1] += sign * coeff;
            first = false;
        }
        Ok(HClass(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn ray_expressions() {
        assert_eq!(parse_ray("e1+2*e3", 3).unwrap(), HClass::from_i64s(&[1, 0, 2]));
        assert_eq!(parse_ray("[0,1,-1]", 3).unwrap(), HClass::from_i64s(&[0, 1, -1]));
        assert_eq!(parse_ray(" -e2 - 3*e1 + e2 ", 2).unwrap(), HClass::from_i64s(&[-3, 0]));
        assert!(matches!(parse_ray("0.5*e1", 3), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_ray("e4", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_ray("e1 e2", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_ray("[1,2]", 3), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_ray("[1,x,2]", 3), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_ray("", 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn sequence_csv() {
        let vals = vec![int(1), ratio(-1, 2), int(0)];
        let text = write_ray_sequence_csv(&vals).unwrap();
        assert_eq!(text, "d,c_d\n0,1/1\n1,-1/2\n2,0/1\n");
        assert_eq!(parse_ray_sequence_csv(&text).unwrap(), vals);
        assert!(parse_ray_sequence_csv("d,c_d\n1,3\n").is_err());
    }

    #[test]
    fn oracle_csv() {
        let l = Lattice::diagonal(1, 1);
        let s = HClass::from_i64s(&[2, 1]);
        let text = write_oracle_csv(2, &[(s.clone(), vec![int(1), int(0), int(3)])]).unwrap();
        assert_eq!(text, "s1,s2,d,q_d\n2,1,0,1/1\n2,1,1,0/1\n2,1,2,3/1\n");
        let oracle = parse_oracle_csv(&text, &l).unwrap();
        assert_eq!(oracle.max_degree(&s), Some(2));
        assert!(parse_oracle_csv("s1,d,q_d\n1,0,1\n", &l).is_err());
        let rows = parse_oracle_rows("s1,s2,d,q_d\n3,1,1,2\n1,1,0,5\n3,1,0,1/2\n", 2).unwrap();
        assert_eq!(rows[0].0, HClass::from_i64s(&[3, 1]));
        assert_eq!(rows[0].1, vec![Some(ratio(1, 2)), Some(int(2))]);
        assert_eq!(rows[1].1, vec![Some(int(5))]);
    }
}
