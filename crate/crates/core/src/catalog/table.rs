//! Pairs `(𝔥, 𝔤)` of isotropy and transitive algebras for six-dimensional
//! homogeneous nearly Kähler spaces.

use serde::{Deserialize, Serialize};

use super::{cp3::cp3_model, flag::flag_model, ledger_obata::ledger_obata_su2};
use crate::error::Result;
use crate::s3xs3::CyclicCoframe;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Summand {
    /// `iℝ ≅ u(1)`
    U1,
    Su(usize),
    Sp(usize),
    G2,
}

impl Summand {
    pub fn dim(self) -> usize {
        match self {
            Summand::U1 => 1,
            Summand::Su(n) => n * n - 1,
            Summand::Sp(n) => n * (2 * n + 1),
            Summand::G2 => 14,
        }
    }

    pub fn label(self) -> String {
        match self {
            Summand::U1 => "iR".into(),
            Summand::Su(n) => format!("su({n})"),
            Summand::Sp(n) => format!("sp({n})"),
            Summand::G2 => "g2".into(),
        }
    }
}

pub fn algebra_dim(a: &[Summand]) -> usize {
    a.iter().map(|s| s.dim()).sum()
}

pub fn algebra_label(a: &[Summand]) -> String {
    if a.is_empty() {
        return "0".into();
    }
    a.iter().map(|s| s.label()).collect::<Vec<_>>().join(" + ")
}

/// Subalgebras of `su(3)` that can occur as isotropy, by name.
pub const ALLOWED_ISOTROPY: [&str; 6] = ["0", "u(1)", "2u(1)", "su(2)", "u(2)", "su(3)"];

/// Names an isotropy algebra from the allowed list, if it is one.
pub fn isotropy_name(h: &[Summand]) -> Option<&'static str> {
    let mut h = h.to_vec();
    h.sort();
    match h.as_slice() {
        [] => Some("0"),
        [Summand::U1] => Some("u(1)"),
        [Summand::U1, Summand::U1] => Some("2u(1)"),
        [Summand::Su(2)] => Some("su(2)"),
        [Summand::U1, Summand::Su(2)] => Some("u(2)"),
        [Summand::Su(3)] => Some("su(3)"),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TableRow {
    pub h: String,
    pub g: String,
    pub dim_h: usize,
    pub dim_g: usize,
    pub codim: usize,
    pub isotropy: Option<String>,
    pub space: String,
    /// `(dim 𝔤, dim 𝔥)` of the explicit model built here, when there is one.
    pub model_dims: Option<(usize, usize)>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub verdict: bool,
}

pub fn table_rows() -> Vec<(Vec<Summand>, Vec<Summand>, &'static str)> {
    use Summand::*;
    vec![
        (vec![], vec![Su(2), Su(2)], "S3xS3"),
        (vec![U1], vec![U1, Su(2), Su(2)], "S3xS3"),
        (vec![U1, U1], vec![U1, U1, Su(2), Su(2)], "S3xS3"),
        (vec![U1, U1], vec![Su(3)], "F3"),
        (vec![Su(2)], vec![Su(2), Su(2), Su(2)], "S3xS3"),
        (vec![U1, Su(2)], vec![U1, Su(2), Su(2), Su(2)], "S3xS3"),
        (vec![U1, Su(2)], vec![Sp(2)], "CP3"),
        (vec![Su(3)], vec![G2], "S6"),
    ]
}

fn model_dims(row: usize) -> Result<Option<(usize, usize)>> {
    Ok(match row {
        0 => {
            let cf = CyclicCoframe::<Rational>::new()?;
            Some((cf.space().algebra().dim(), cf.space().dim_h()))
        }
        3 => {
            let m = flag_model()?;
            Some((m.space.algebra().dim(), m.space.dim_h()))
        }
        4 => {
            let m = ledger_obata_su2()?;
            Some((m.space.algebra().dim(), m.space.dim_h()))
        }
        6 => {
            let m = cp3_model()?;
            Some((m.space.algebra().dim(), m.space.dim_h()))
        }
        _ => None,
    })
}

pub fn table_check() -> Result<TableReport> {
    let mut rows = Vec::new();
    for (i, (h, g, space)) in table_rows().into_iter().enumerate() {
        let (dim_h, dim_g) = (algebra_dim(&h), algebra_dim(&g));
        let codim = dim_g.saturating_sub(dim_h);
        let isotropy = isotropy_name(&h).map(str::to_string);
        let model = model_dims(i)?;
        let ok = dim_g == dim_h + 6 && isotropy.is_some() && model.is_none_or(|m| m == (dim_g, dim_h));
        rows.push(TableRow {
            h: algebra_label(&h),
            g: algebra_label(&g),
            dim_h,
            dim_g,
            codim,
            isotropy,
            space: space.to_string(),
            model_dims: model,
            ok,
        });
    }
    let verdict = rows.len() == 8 && rows.iter().all(|r| r.ok);
    Ok(TableReport { rows, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows() {
        let r = table_check().unwrap();
        assert!(r.verdict, "{r:#?}");
        let last = &r.rows[7];
        assert_eq!((last.dim_g, last.dim_h), (14, 8));
        assert_eq!(r.rows[6].model_dims, Some((10, 4)));
        assert_eq!(r.rows[0].isotropy.as_deref(), Some("0"));
    }

    #[test]
    fn rejects_non_subalgebra() {
        assert_eq!(isotropy_name(&[Summand::Sp(2)]), None);
        assert_eq!(isotropy_name(&[Summand::Su(2), Summand::U1]), Some("u(2)"));
    }
}
