//! Non-standard word expansion.
//!
//! A single left-to-right scan over the text. At each position the rule
//! categories are tried in priority order (dates, times, currency, measured
//! quantities, decimals, decades, ordinals, fractions, grouped cardinals,
//! plain cardinals) and the first one that matches wins; alternatives
//! inside a category are listed longest first. Replaced spans are never
//! revisited, so every expansion is applied at most once.

use std::fmt;

use once_cell::sync::Lazy;
use regex::{Captures, Regex};

use super::numbers::{cardinal, cardinal_str, digits, ordinal, pluralize_last, year};

static NSW: Lazy<Regex> = Lazy::new(|| {
    Regex::new(
        r"(?xi)
        (?P<date>\b(?P<dy>\d{4})/(?P<dm>\d{1,2})/(?P<dd>\d{1,2})\b)
      | (?P<time>\b(?P<th>\d{1,2})(?:[:.](?P<tm>\d{2}))?\s?(?P<mer>[ap])\.?\s?m\b\.?)
      | (?P<clock>\b(?P<ch>\d{1,2}):(?P<cm>\d{2})\b)
      | (?P<usd>\$(?P<ud>\d{1,3}(?:,\d{3})+|\d+)(?:\.(?P<uc>\d{2}))?(?:\s(?P<us>thousand|million|billion|trillion))?\b)
      | (?P<ocur>[£€¥₹](?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)
      | (?P<qty>\b(?P<qv>\d+(?:\.\d+)?)(?:\s?(?P<qu>kg|km|cm|mm|mg|ml|mph|lbs|lb|ft|mi|g|m|l)\b|(?P<pct>%)))
      | (?P<dec>\b(?P<di>\d+)\.(?P<df>\d+)\b)
      | (?P<decade>\b(?P<dv>\d{1,3}0)s\b)
      | (?P<ord>\b(?P<ov>\d+)(?:st|nd|rd|th)\b)
      | (?P<frac>\b(?P<fn>\d+)/(?P<fd>10|[2-9])\b)
      | (?P<grp>\b\d{1,3}(?:,\d{3})+\b)
      | (?P<num>\b\d+\b)
        ",
    )
    .expect("NSW grammar compiles")
});

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

/// A span the expander recognized but could not verbalize. The span is
/// left verbatim in the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NswWarning {
    pub span: String,
    pub reason: &'static str,
}

impl fmt::Display for NswWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "left {:?} verbatim: {}", self.span, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NswExpansion {
    pub text: String,
    pub warnings: Vec<NswWarning>,
}

/// Rewrites numbers, dates, times, money and quantities into lowercase
/// spoken-form English. Text outside recognized spans is untouched.
pub fn expand_nsw(text: &str) -> NswExpansion {
    let mut warnings = Vec::new();
    let expanded = NSW.replace_all(text, |caps: &Captures<'_>| {
        let whole = caps.get(0).map_or("", |m| m.as_str());
        match verbalize(caps) {
            Ok(words) => words,
            Err(reason) => {
                warnings.push(NswWarning {
                    span: whole.to_owned(),
                    reason,
                });
                whole.to_owned()
            }
        }
    });
    NswExpansion {
        text: expanded.into_owned(),
        warnings,
    }
}

type Verbalized = Result<String, &'static str>;

fn group<'a>(caps: &'a Captures<'_>, name: &str) -> Option<&'a str> {
    caps.name(name).map(|m| m.as_str())
}

fn number(s: &str) -> Result<u64, &'static str> {
    s.replace(',', "")
        .parse()
        .map_err(|_| "number out of range")
}

fn verbalize(caps: &Captures<'_>) -> Verbalized {
    if caps.name("date").is_some() {
        date(caps)
    } else if caps.name("time").is_some() {
        time(caps)
    } else if caps.name("clock").is_some() {
        clock(caps)
    } else if caps.name("usd").is_some() {
        dollars(caps)
    } else if caps.name("ocur").is_some() {
        Err("only $ amounts are verbalized")
    } else if caps.name("qty").is_some() {
        quantity(caps)
    } else if caps.name("dec").is_some() {
        decimal(
            group(caps, "di").unwrap_or(""),
            group(caps, "df").unwrap_or(""),
        )
    } else if let Some(v) = group(caps, "dv") {
        Ok(pluralize_last(&year(number(v)?)))
    } else if let Some(v) = group(caps, "ov") {
        Ok(ordinal(number(v)?))
    } else if caps.name("frac").is_some() {
        fraction(caps)
    } else if let Some(g) = group(caps, "grp") {
        Ok(cardinal(number(g)?))
    } else if let Some(n) = group(caps, "num") {
        cardinal_str(n).ok_or("number out of range")
    } else {
        Err("unrecognized span")
    }
}

fn date(caps: &Captures<'_>) -> Verbalized {
    let y = number(group(caps, "dy").unwrap_or(""))?;
    let m = number(group(caps, "dm").unwrap_or(""))?;
    let d = number(group(caps, "dd").unwrap_or(""))?;
    // Calendar validity is deliberately not checked (2/30 is accepted).
    if !(1..=12).contains(&m) {
        return Err("month outside 1..12");
    }
    if !(1..=31).contains(&d) {
        return Err("day outside 1..31");
    }
    Ok(format!(
        "{} {} {}",
        MONTHS[(m - 1) as usize],
        ordinal(d),
        year(y)
    ))
}

fn minutes(m: u64) -> String {
    match m {
        0 => String::new(),
        1..=9 => format!(" oh {}", cardinal(m)),
        _ => format!(" {}", cardinal(m)),
    }
}

fn time(caps: &Captures<'_>) -> Verbalized {
    let h = number(group(caps, "th").unwrap_or(""))?;
    let m = match group(caps, "tm") {
        Some(m) => number(m)?,
        None => 0,
    };
    if !(1..=12).contains(&h) || m > 59 {
        return Err("not a valid 12-hour time");
    }
    let meridiem = match group(caps, "mer") {
        Some(x) if x.eq_ignore_ascii_case("p") => "PM",
        _ => "AM",
    };
    Ok(format!("{}{} {meridiem}", cardinal(h), minutes(m)))
}

fn clock(caps: &Captures<'_>) -> Verbalized {
    let h = number(group(caps, "ch").unwrap_or(""))?;
    let m = number(group(caps, "cm").unwrap_or(""))?;
    if h > 23 || m > 59 {
        return Err("not a valid clock time");
    }
    Ok(match (h, m) {
        (_, 0) => format!("{} o'clock", cardinal(h)),
        _ => format!("{}{}", cardinal(h), minutes(m)),
    })
}

fn dollars(caps: &Captures<'_>) -> Verbalized {
    let whole = number(group(caps, "ud").unwrap_or(""))?;
    let cents = match group(caps, "uc") {
        Some(c) => number(c)?,
        None => 0,
    };
    if let Some(scale) = group(caps, "us") {
        let amount = match group(caps, "uc") {
            Some(c) => format!(
                "{} point {}",
                cardinal(whole),
                digits(c).unwrap_or_default()
            ),
            None => cardinal(whole),
        };
        return Ok(format!("{amount} {} dollars", scale.to_lowercase()));
    }
    let dollar_part = match whole {
        1 => "one dollar".to_owned(),
        n => format!("{} dollars", cardinal(n)),
    };
    let cent_part = match cents {
        1 => "one cent".to_owned(),
        n => format!("{} cents", cardinal(n)),
    };
    Ok(match (whole, cents) {
        (_, 0) => dollar_part,
        (0, _) => cent_part,
        _ => format!("{dollar_part} {cent_part}"),
    })
}

fn unit_name(unit: &str) -> Option<(&'static str, &'static str)> {
    Some(match unit.to_ascii_lowercase().as_str() {
        "kg" => ("kilogram", "kilograms"),
        "km" => ("kilometer", "kilometers"),
        "cm" => ("centimeter", "centimeters"),
        "mm" => ("millimeter", "millimeters"),
        "mg" => ("milligram", "milligrams"),
        "ml" => ("milliliter", "milliliters"),
        "mph" => ("mile per hour", "miles per hour"),
        "lb" | "lbs" => ("pound", "pounds"),
        "ft" => ("foot", "feet"),
        "mi" => ("mile", "miles"),
        "g" => ("gram", "grams"),
        "m" => ("meter", "meters"),
        "l" => ("liter", "liters"),
        _ => return None,
    })
}

fn amount(value: &str) -> Verbalized {
    match value.split_once('.') {
        Some((i, f)) => decimal(i, f),
        None => cardinal_str(value).ok_or("number out of range"),
    }
}

fn quantity(caps: &Captures<'_>) -> Verbalized {
    let value = group(caps, "qv").unwrap_or("");
    let spoken = amount(value)?;
    if caps.name("pct").is_some() {
        return Ok(format!("{spoken} percent"));
    }
    let unit = group(caps, "qu").unwrap_or("");
    let (singular, plural) = unit_name(unit).ok_or("unknown unit")?;
    Ok(format!(
        "{spoken} {}",
        if value == "1" { singular } else { plural }
    ))
}

fn decimal(int_part: &str, frac_part: &str) -> Verbalized {
    let int_words = cardinal_str(int_part).ok_or("number out of range")?;
    let frac_words = digits(frac_part).ok_or("bad fraction digits")?;
    Ok(format!("{int_words} point {frac_words}"))
}

fn fraction(caps: &Captures<'_>) -> Verbalized {
    let num = number(group(caps, "fn").unwrap_or(""))?;
    let den = number(group(caps, "fd").unwrap_or(""))?;
    let (one, many) = match den {
        2 => ("half", "halves"),
        3 => ("third", "thirds"),
        4 => ("quarter", "quarters"),
        5 => ("fifth", "fifths"),
        6 => ("sixth", "sixths"),
        7 => ("seventh", "sevenths"),
        8 => ("eighth", "eighths"),
        9 => ("ninth", "ninths"),
        10 => ("tenth", "tenths"),
        _ => return Err("unsupported denominator"),
    };
    Ok(format!(
        "{} {}",
        cardinal(num),
        if num == 1 { one } else { many }
    ))
}
