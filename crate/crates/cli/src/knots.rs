use bandforge::surgery::{
    bhw_example_report, double_branched_cover, lens_equivalent, lens_mirror, matignon_family,
    parse_pair, slope_distance, LensSpace, Slope,
};
use bandforge::tangle::{
    conway_expand, cosmetic_band_partner, eval_conway, four_move_signature_obstruction,
    is_unlinking_number_one, mirror_two_bridge, normalize_two_bridge, signature_two_bridge,
    two_bridge_equivalent, verify_chirally_cosmetic, ConwayForm, TwoBridge,
};
use clap::Subcommand;
use serde_json::json;

use crate::report::{Failure, Report};

#[derive(Subcommand, Debug)]
pub enum TwoBridgeCommand {
    /// Evaluate a Conway form such as `3,2,-3`.
    Eval {
        #[arg(allow_hyphen_values = true)]
        conway: String,
    },
    /// Conway form of `p/q`.
    Expand {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
    /// Schubert equivalence of two links `p/q`.
    Equal {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Mirror image.
    Mirror {
        #[arg(allow_hyphen_values = true)]
        link: String,
    },
    /// Unlinking-number-one witness `(n, m)` for `S(2n^2, 2nm +- 1)`.
    Unlink1 {
        #[arg(allow_hyphen_values = true)]
        link: String,
    },
    /// Banding partner of a +-2 palindrome and the chirally cosmetic check.
    Cosmetic {
        #[arg(allow_hyphen_values = true)]
        conway: String,
    },
    /// Knot signature.
    Signature {
        #[arg(allow_hyphen_values = true)]
        knot: String,
    },
    /// Whether signatures rule out a single 4-move between two knots.
    Fourmove {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SurgeryCommand {
    /// Distance between two slopes `p/q` (`1/0` is the meridian).
    Distance {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Homeomorphism of lens spaces `L(p, q)`.
    LensEqual {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Also allow orientation-reversing homeomorphisms.
        #[arg(long)]
        unoriented: bool,
    },
    /// Mirror image of a lens space.
    LensMirror {
        #[arg(allow_hyphen_values = true)]
        lens: String,
    },
    /// Double branched cover of a two-bridge link.
    Dbc {
        #[arg(allow_hyphen_values = true)]
        link: String,
    },
    /// Matignon's lens space `L(2m^2, 2mn - 1)` and its two-bridge link.
    Matignon { m: i64, n: i64 },
    /// Bookkeeping for the 9_27 cosmetic surgery example.
    Bhw,
}

fn conway(s: &str) -> Result<ConwayForm, Failure> {
    s.parse().map_err(Failure::parse)
}

fn two_bridge(s: &str) -> Result<TwoBridge, Failure> {
    let (p, q) = parse_pair(s).ok_or_else(|| Failure::parse(format!("cannot read {s:?} as p/q")))?;
    normalize_two_bridge(p, q).map_err(Failure::parse)
}

fn slope(s: &str) -> Result<Slope, Failure> {
    s.parse().map_err(Failure::parse)
}

fn lens(s: &str) -> Result<LensSpace, Failure> {
    s.parse().map_err(Failure::parse)
}

fn tb_json(tb: &TwoBridge) -> serde_json::Value {
    json!({"p": tb.p(), "q": tb.q(), "schubert": tb.to_string()})
}

fn lens_json(l: &LensSpace) -> serde_json::Value {
    json!({"p": l.p(), "q": l.q(), "name": l.to_string()})
}

pub fn run_twobridge(cmd: &TwoBridgeCommand) -> Result<Report, Failure> {
    use TwoBridgeCommand::*;
    Ok(match cmd {
        Eval { conway: s } => {
            let cf = conway(s)?;
            let value = eval_conway(&cf);
            let link = TwoBridge::from_fraction(&value).ok();
            Report::new(
                "twobridge eval",
                json!({"conway": cf}),
                json!({
                    "fraction": value.to_string(),
                    "numerator": value.numer().to_string(),
                    "denominator": value.denom().to_string(),
                    "two_bridge": link.as_ref().map(tb_json),
                }),
            )
        }
        Expand { fraction } => {
            let (p, q) = parse_pair(fraction)
                .ok_or_else(|| Failure::parse(format!("cannot read {fraction:?} as p/q")))?;
            let cf = conway_expand(p, q).map_err(Failure::parse)?;
            Report::new(
                "twobridge expand",
                json!({"fraction": fraction}),
                json!({"conway": cf, "text": cf.to_string()}),
            )
        }
        Equal { a, b } => {
            let (x, y) = (two_bridge(a)?, two_bridge(b)?);
            Report::new(
                "twobridge equal",
                json!({"a": a, "b": b}),
                json!({"a": tb_json(&x), "b": tb_json(&y), "equivalent": two_bridge_equivalent(&x, &y)}),
            )
        }
        Mirror { link } => {
            let x = two_bridge(link)?;
            Report::new(
                "twobridge mirror",
                json!({"link": link}),
                json!({"link": tb_json(&x), "mirror": tb_json(&mirror_two_bridge(&x))}),
            )
        }
        Unlink1 { link } => {
            let x = two_bridge(link)?;
            let witness = is_unlinking_number_one(&x).map_err(Failure::other)?;
            Report::new(
                "twobridge unlink1",
                json!({"link": link}),
                json!({
                    "link": tb_json(&x),
                    "witness": witness.map(|(n, m)| json!({"n": n, "m": m})),
                }),
            )
        }
        Cosmetic { conway: s } => {
            let cf = conway(s)?;
            let partner = cosmetic_band_partner(&cf).map_err(Failure::other)?;
            let chiral = verify_chirally_cosmetic(&cf).map_err(Failure::other)?;
            Report::new(
                "twobridge cosmetic",
                json!({"conway": cf}),
                json!({
                    "partner": partner,
                    "partner_text": partner.to_string(),
                    "original_value": eval_conway(&cf).to_string(),
                    "partner_value": eval_conway(&partner).to_string(),
                    "chirally_cosmetic": chiral,
                }),
            )
        }
        Signature { knot } => {
            let x = two_bridge(knot)?;
            let sigma = signature_two_bridge(&x).map_err(Failure::other)?;
            Report::new(
                "twobridge signature",
                json!({"knot": knot}),
                json!({"knot": tb_json(&x), "signature": sigma.get()}),
            )
        }
        Fourmove { a, b } => {
            let (x, y) = (two_bridge(a)?, two_bridge(b)?);
            let sx = signature_two_bridge(&x).map_err(Failure::other)?.get();
            let sy = signature_two_bridge(&y).map_err(Failure::other)?.get();
            let obstructed = four_move_signature_obstruction(&x, &y).map_err(Failure::other)?;
            Report::new(
                "twobridge fourmove",
                json!({"a": a, "b": b}),
                json!({
                    "a": tb_json(&x),
                    "b": tb_json(&y),
                    "signatures": [sx, sy],
                    "obstructed": obstructed,
                }),
            )
        }
    })
}

pub fn run_surgery(cmd: &SurgeryCommand) -> Result<Report, Failure> {
    use SurgeryCommand::*;
    Ok(match cmd {
        Distance { a, b } => {
            let (x, y) = (slope(a)?, slope(b)?);
            Report::new(
                "surgery distance",
                json!({"a": a, "b": b}),
                json!({"a": x.to_string(), "b": y.to_string(), "distance": slope_distance(&x, &y)}),
            )
        }
        LensEqual { a, b, unoriented } => {
            let (x, y) = (lens(a)?, lens(b)?);
            Report::new(
                "surgery lens-equal",
                json!({"a": a, "b": b, "oriented": !unoriented}),
                json!({
                    "a": lens_json(&x),
                    "b": lens_json(&y),
                    "equivalent": lens_equivalent(&x, &y, !unoriented),
                }),
            )
        }
        LensMirror { lens: s } => {
            let x = lens(s)?;
            Report::new(
                "surgery lens-mirror",
                json!({"lens": s}),
                json!({"lens": lens_json(&x), "mirror": lens_json(&lens_mirror(&x))}),
            )
        }
        Dbc { link } => {
            let x = two_bridge(link)?;
            Report::new(
                "surgery dbc",
                json!({"link": link}),
                json!({"link": tb_json(&x), "cover": lens_json(&double_branched_cover(&x))}),
            )
        }
        Matignon { m, n } => {
            let (l, k) = matignon_family(*m, *n).map_err(Failure::other)?;
            Report::new(
                "surgery matignon",
                json!({"m": m, "n": n}),
                json!({"lens": lens_json(&l), "link": tb_json(&k)}),
            )
            .check(
                "cover and unlinking witness consistent",
                true,
                format!("{k} double covers to {l} and has unlinking number one"),
            )
        }
        Bhw => {
            let r = bhw_example_report().map_err(Failure::other)?;
            let mut report = Report::new(
                "surgery bhw",
                json!({}),
                json!({
                    "knot": tb_json(&r.knot),
                    "lens": lens_json(&r.lens),
                    "mirror": lens_json(&r.mirror),
                    "slopes": [r.slopes.0.to_string(), r.slopes.1.to_string()],
                    "distance": r.distance,
                    "passed": format!("{}/{}", r.passed(), r.assertions.len()),
                }),
            );
            report.assertions = r.assertions;
            report
        }
    })
}
