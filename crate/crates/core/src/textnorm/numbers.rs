//! English number verbalization: cardinals, ordinals, years, digit strings.

const ONES: [&str; 20] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];

const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

const SCALES: [(u64, &str); 5] = [
    (1_000_000_000_000_000, "quadrillion"),
    (1_000_000_000_000, "trillion"),
    (1_000_000_000, "billion"),
    (1_000_000, "million"),
    (1_000, "thousand"),
];

fn push_below_thousand(n: u64, out: &mut Vec<&'static str>) {
    debug_assert!(n < 1000);
    let hundreds = n / 100;
    let rest = n % 100;
    if hundreds > 0 {
        out.push(ONES[hundreds as usize]);
        out.push("hundred");
    }
    if rest == 0 {
        return;
    }
    if rest < 20 {
        out.push(ONES[rest as usize]);
    } else {
        out.push(TENS[(rest / 10) as usize]);
        if !rest.is_multiple_of(10) {
            out.push(ONES[(rest % 10) as usize]);
        }
    }
}

/// `13000` -> `thirteen thousand`. No "and", no hyphens.
pub fn cardinal(n: u64) -> String {
    if n == 0 {
        return "zero".to_owned();
    }
    let mut words = Vec::new();
    let mut rest = n;
    for &(scale, name) in &SCALES {
        if rest >= scale {
            push_below_thousand(rest / scale, &mut words);
            words.push(name);
            rest %= scale;
        }
    }
    push_below_thousand(rest, &mut words);
    words.join(" ")
}

fn ordinal_word(word: &str) -> String {
    match word {
        "one" => "first".to_owned(),
        "two" => "second".to_owned(),
        "three" => "third".to_owned(),
        "five" => "fifth".to_owned(),
        "eight" => "eighth".to_owned(),
        "nine" => "ninth".to_owned(),
        "twelve" => "twelfth".to_owned(),
        w if w.ends_with('y') => format!("{}ieth", &w[..w.len() - 1]),
        w => format!("{w}th"),
    }
}

/// `21` -> `twenty first`, `30` -> `thirtieth`.
pub fn ordinal(n: u64) -> String {
    let card = cardinal(n);
    match card.rsplit_once(' ') {
        Some((head, last)) => format!("{head} {}", ordinal_word(last)),
        None => ordinal_word(&card),
    }
}

/// Year reading: `1998` -> `nineteen ninety eight`, `2005` -> `two
/// thousand five`, `1905` -> `nineteen oh five`, `1900` -> `nineteen
/// hundred`.
pub fn year(n: u64) -> String {
    if !(1000..=9999).contains(&n) {
        return cardinal(n);
    }
    let high = n / 100;
    let low = n % 100;
    if high.is_multiple_of(10) && low < 10 {
        // 2000..2009, 1000..1009
        return cardinal(n);
    }
    match low {
        0 => format!("{} hundred", cardinal(high)),
        1..=9 => format!("{} oh {}", cardinal(high), ONES[low as usize]),
        _ => format!("{} {}", cardinal(high), cardinal(low)),
    }
}

/// Plural of the final number word: `nineteen eighty` -> `nineteen
/// eighties`.
pub fn pluralize_last(words: &str) -> String {
    let (head, last) = match words.rsplit_once(' ') {
        Some((h, l)) => (Some(h), l),
        None => (None, words),
    };
    let plural = match last {
        "six" => "sixes".to_owned(),
        w if w.ends_with('y') => format!("{}ies", &w[..w.len() - 1]),
        w => format!("{w}s"),
    };
    match head {
        Some(h) => format!("{h} {plural}"),
        None => plural,
    }
}

/// Reads each digit: `07` -> `zero seven`.
pub fn digits(s: &str) -> Option<String> {
    let words: Option<Vec<&str>> = s
        .chars()
        .map(|c| c.to_digit(10).map(|d| ONES[d as usize]))
        .collect();
    words.map(|w| w.join(" "))
}

/// Cardinal for a digit string. Leading zeros are read digit by digit.
/// `None` on overflow or non-digits.
pub fn cardinal_str(s: &str) -> Option<String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return digits(s);
    }
    s.parse::<u64>().ok().map(cardinal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinals() {
        assert_eq!(cardinal(0), "zero");
        assert_eq!(cardinal(7), "seven");
        assert_eq!(cardinal(21), "twenty one");
        assert_eq!(cardinal(100), "one hundred");
        assert_eq!(cardinal(13_000), "thirteen thousand");
        assert_eq!(
            cardinal(1_234_567),
            "one million two hundred thirty four thousand five hundred sixty seven"
        );
        assert_eq!(cardinal(90), "ninety");
    }

    #[test]
    fn ordinals() {
        assert_eq!(ordinal(1), "first");
        assert_eq!(ordinal(21), "twenty first");
        assert_eq!(ordinal(30), "thirtieth");
        assert_eq!(ordinal(12), "twelfth");
        assert_eq!(ordinal(100), "one hundredth");
        assert_eq!(ordinal(3), "third");
    }

    #[test]
    fn years() {
        assert_eq!(year(1998), "nineteen ninety eight");
        assert_eq!(year(1980), "nineteen eighty");
        assert_eq!(year(1900), "nineteen hundred");
        assert_eq!(year(1905), "nineteen oh five");
        assert_eq!(year(2000), "two thousand");
        assert_eq!(year(2007), "two thousand seven");
        assert_eq!(year(2010), "twenty ten");
        assert_eq!(year(476), "four hundred seventy six");
    }

    #[test]
    fn plurals() {
        assert_eq!(pluralize_last("nineteen eighty"), "nineteen eighties");
        assert_eq!(pluralize_last("nineteen hundred"), "nineteen hundreds");
        assert_eq!(pluralize_last("two thousand"), "two thousands");
        assert_eq!(pluralize_last("sixty"), "sixties");
    }

    #[test]
    fn digit_strings() {
        assert_eq!(cardinal_str("007").unwrap(), "zero zero seven");
        assert_eq!(cardinal_str("42").unwrap(), "forty two");
        assert!(cardinal_str("99999999999999999999999").is_none());
        assert!(cardinal_str("4a").is_none());
    }
}
