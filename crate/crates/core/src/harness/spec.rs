//! JSON domain specifications. Rationals travel as strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Deserialize;

use crate::arith::parse_rational;
use crate::error::{Error, Result};
use crate::exactcount::Volume;
use crate::forms::{Dimension, QuadraticForm};
use crate::profiles::RevolutionProfile;

/// The body whose dilations are counted.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Circle,
    Ellipse(QuadraticForm),
    Ball,
    Ellipsoid(QuadraticForm),
    Revolution(RevolutionProfile),
}

impl Domain {
    pub fn kind(&self) -> &'static str {
        match self {
            Domain::Circle => "circle",
            Domain::Ellipse(_) => "ellipse",
            Domain::Ball => "ball",
            Domain::Ellipsoid(_) => "ellipsoid",
            Domain::Revolution(_) => "revolution",
        }
    }

    pub fn dim(&self) -> Dimension {
        match self {
            Domain::Circle | Domain::Ellipse(_) => Dimension::Two,
            _ => Dimension::Three,
        }
    }
}

/// A domain together with the exact volume of its unit body.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub domain: Domain,
    pub volume: Volume,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    matrix: Option<Vec<Vec<String>>>,
    profile: Option<String>,
    alpha: Option<String>,
    name: Option<String>,
    coefficients: Option<Vec<String>>,
}

impl DomainSpec {
    pub fn new(domain: Domain) -> Self {
        let one = BigRational::one();
        let volume = match &domain {
            Domain::Circle => Volume::disc(one),
            Domain::Ball => Volume::ball(one),
            Domain::Ellipse(form) | Domain::Ellipsoid(form) => Volume::of_form(form),
            Domain::Revolution(profile) => Volume {
                dim: Dimension::Three,
                pi_multiple: profile.volume_pi_multiple(),
                det: one,
            },
        };
        DomainSpec { domain, volume }
    }

    /// Parse `{"kind": ..., ...}`; see the README for the accepted shapes.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        let unexpected = |field: &str| {
            Error::Parse(format!("field {field:?} is not allowed for kind {:?}", raw.kind))
        };
        let require_absent = |fields: &[(&str, bool)]| -> Result<()> {
            match fields.iter().find(|(_, present)| *present) {
                Some((name, _)) => Err(unexpected(name)),
                None => Ok(()),
            }
        };
        let profile_fields = [
            ("profile", raw.profile.is_some()),
            ("alpha", raw.alpha.is_some()),
            ("name", raw.name.is_some()),
            ("coefficients", raw.coefficients.is_some()),
        ];
        let domain = match raw.kind.as_str() {
            "circle" | "ball" => {
                require_absent(&profile_fields)?;
                require_absent(&[("matrix", raw.matrix.is_some())])?;
                if raw.kind == "circle" {
                    Domain::Circle
                } else {
                    Domain::Ball
                }
            }
            "ellipse" | "ellipsoid" => {
                require_absent(&profile_fields)?;
                let rows = raw
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::Parse(format!("kind {:?} requires \"matrix\"", raw.kind)))?;
                let form = QuadraticForm::from_strings(rows)?;
                let expected = if raw.kind == "ellipse" { 2 } else { 3 };
                if form.dim().get() != expected {
                    return Err(Error::DimensionMismatch { expected, got: form.dim().get() });
                }
                if expected == 2 {
                    Domain::Ellipse(form)
                } else {
                    Domain::Ellipsoid(form)
                }
            }
            "revolution" => {
                require_absent(&[("matrix", raw.matrix.is_some())])?;
                Domain::Revolution(parse_profile(&raw)?)
            }
            other => return Err(Error::Parse(format!("unknown domain kind {other:?}"))),
        };
        Ok(DomainSpec::new(domain))
    }
}

fn parse_profile(raw: &RawSpec) -> Result<RevolutionProfile> {
    let which = raw
        .profile
        .as_deref()
        .ok_or_else(|| Error::Parse("kind \"revolution\" requires \"profile\"".into()))?;
    let stray = |field: &str| Error::Parse(format!("field {field:?} is not allowed for profile {which:?}"));
    match which {
        "sphere" => {
            if raw.alpha.is_some() {
                return Err(stray("alpha"));
            }
            if raw.coefficients.is_some() {
                return Err(stray("coefficients"));
            }
            Ok(RevolutionProfile::sphere())
        }
        "spheroid" => {
            if raw.coefficients.is_some() {
                return Err(stray("coefficients"));
            }
            let alpha = raw
                .alpha
                .as_deref()
                .ok_or_else(|| Error::Parse("profile \"spheroid\" requires \"alpha\"".into()))?;
            RevolutionProfile::spheroid(&parse_rational(alpha)?)
        }
        "polynomial" => {
            if raw.alpha.is_some() {
                return Err(stray("alpha"));
            }
            let coeffs = raw
                .coefficients
                .as_ref()
                .ok_or_else(|| Error::Parse("profile \"polynomial\" requires \"coefficients\"".into()))?
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()?;
            RevolutionProfile::polynomial(raw.name.as_deref().unwrap_or("polynomial"), coeffs)
        }
        other => Err(Error::Parse(format!("unknown profile {other:?}"))),
    }
}

/// `from, from + step, …` up to and including `to` when it lies on the grid.
pub fn rational_grid(from: &BigRational, to: &BigRational, step: &BigRational) -> Result<Vec<BigRational>> {
    if step <= &BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::Parse("grid step must be positive".into()));
    }
    if to < from {
        return Err(Error::Parse("grid end lies before its start".into()));
    }
    let mut grid = Vec::new();
    let mut t = from.clone();
    while &t <= to {
        grid.push(t.clone());
        t += step;
    }
    Ok(grid)
}
