//! Text interchange formats.
//!
//! Operator dump: one-line header `dim=<D> domain=<name>` followed by lines
//! `row col value`, where exact values print as `num/den`. Power series dump
//! as ordered coefficient records `k value`.

use crate::error::CoreError;
use crate::field::QQ;
use crate::op::SpMat;
use crate::series::PowerSeries;
use crate::Rat;
use std::io::{BufRead, Write};
use std::str::FromStr;

pub fn write_operator_exact<W: Write>(w: &mut W, m: &SpMat<Rat>) -> Result<(), CoreError> {
    assert_eq!(m.nrows, m.ncols, "operator dump is for square operators");
    writeln!(w, "dim={} domain=exact", m.nrows)?;
    for (r, row) in m.rows.iter().enumerate() {
        for (c, v) in row {
            writeln!(w, "{r} {c} {}", fraction(v))?;
        }
    }
    Ok(())
}

fn fraction(v: &Rat) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn read_operator_exact<R: BufRead>(r: R) -> Result<SpMat<Rat>, CoreError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| CoreError::Parse("empty operator dump".into()))??;
    let mut dim = None;
    for tok in header.split_whitespace() {
        if let Some(d) = tok.strip_prefix("dim=") {
            dim = Some(d.parse::<usize>().map_err(|e| CoreError::Parse(e.to_string()))?);
        } else if let Some(name) = tok.strip_prefix("domain=") {
            if name != "exact" {
                return Err(CoreError::Parse(format!("expected exact domain, got {name}")));
            }
        }
    }
    let dim = dim.ok_or_else(|| CoreError::Parse("missing dim= in header".into()))?;
    let mut triplets = Vec::new();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let row: usize = it
            .next()
            .ok_or_else(|| CoreError::Parse("missing row".into()))?
            .parse()
            .map_err(|e: std::num::ParseIntError| CoreError::Parse(e.to_string()))?;
        let col: usize = it
            .next()
            .ok_or_else(|| CoreError::Parse("missing col".into()))?
            .parse()
            .map_err(|e: std::num::ParseIntError| CoreError::Parse(e.to_string()))?;
        let val = Rat::from_str(
            it.next().ok_or_else(|| CoreError::Parse("missing value".into()))?,
        )
        .map_err(CoreError::Parse)?;
        if row >= dim || col >= dim {
            return Err(CoreError::Parse(format!("entry ({row},{col}) outside dim {dim}")));
        }
        triplets.push((row, col, val));
    }
    Ok(SpMat::from_triplets(&QQ, dim, dim, triplets))
}

pub fn write_series<W: Write>(w: &mut W, s: &PowerSeries) -> Result<(), CoreError> {
    writeln!(w, "order={} domain=exact", s.truncation_order())?;
    for (k, c) in s.coeffs.iter().enumerate() {
        writeln!(w, "{k} {}", fraction(c))?;
    }
    Ok(())
}

pub fn read_series<R: BufRead>(r: R) -> Result<PowerSeries, CoreError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| CoreError::Parse("empty series dump".into()))??;
    let mut order = None;
    for tok in header.split_whitespace() {
        if let Some(d) = tok.strip_prefix("order=") {
            order = Some(d.parse::<usize>().map_err(|e| CoreError::Parse(e.to_string()))?);
        }
    }
    let order = order.ok_or_else(|| CoreError::Parse("missing order=".into()))?;
    let mut coeffs = vec![Rat::zero(); order + 1];
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let k: usize = it
            .next()
            .unwrap()
            .parse()
            .map_err(|e: std::num::ParseIntError| CoreError::Parse(e.to_string()))?;
        let val = Rat::from_str(it.next().ok_or_else(|| CoreError::Parse("missing value".into()))?)
            .map_err(CoreError::Parse)?;
        if k > order {
            return Err(CoreError::Parse(format!("coefficient index {k} beyond order {order}")));
        }
        coeffs[k] = val;
    }
    Ok(PowerSeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_round_trip() {
        let m = SpMat::from_triplets(
            &QQ,
            3,
            3,
            vec![(0, 1, Rat::new(-2, 3)), (2, 2, Rat::from_i64(5))],
        );
        let mut buf = Vec::new();
        write_operator_exact(&mut buf, &m).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("dim=3 domain=exact\n"));
        assert!(text.contains("0 1 -2/3"));
        let back = read_operator_exact(&buf[..]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn series_round_trip() {
        let s = PowerSeries::new(vec![Rat::one(), Rat::new(1, 2), Rat::zero()]);
        let mut buf = Vec::new();
        write_series(&mut buf, &s).unwrap();
        let back = read_series(&buf[..]).unwrap();
        assert_eq!(back, s);
    }
}
