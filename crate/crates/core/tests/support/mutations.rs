//! Corrupted variants of a well-formed field-map CSV.

pub fn lines(golden: &str) -> Vec<String> {
    golden.lines().map(str::to_string).collect()
}

pub fn join(lines: &[String]) -> String {
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

fn with_line(golden: &str, n: usize, f: impl Fn(&str) -> String) -> String {
    let mut l = lines(golden);
    l[n] = f(&l[n]);
    join(&l)
}

fn replace_field(golden: &str, n: usize, col: usize, value: &str) -> String {
    with_line(golden, n, |l| {
        let mut parts: Vec<&str> = l.split(',').collect();
        parts[col] = value;
        parts.join(",")
    })
}

/// Twenty-one corrupted copies of `golden`, each paired with a short label.
pub fn mutations(golden: &str) -> Vec<(&'static str, String)> {
    let base = lines(golden);
    let mut out = Vec::new();

    let mut l = base.clone();
    l.remove(10);
    out.push(("row deleted", join(&l)));

    let mut l = base.clone();
    l.remove(32);
    out.push(("last row deleted", join(&l)));

    let mut l = base.clone();
    l.insert(6, base[5].clone());
    out.push(("row duplicated", join(&l)));

    out.push((
        "index columns swapped in header",
        with_line(golden, 0, |_| "slice,itheta,itime,Br,Btheta,Bz".into()),
    ));
    out.push((
        "value columns swapped in header",
        with_line(golden, 0, |_| "slice,itime,itheta,Btheta,Br,Bz".into()),
    ));
    out.push(("header typo", with_line(golden, 0, |h| h.replace("Btheta", "Bt"))));
    out.push(("header missing", join(&base[1..])));
    out.push(("extra header column", with_line(golden, 0, |h| format!("{h},Bx"))));
    out.push(("extra field in row", with_line(golden, 7, |l| format!("{l},0.1"))));
    out.push((
        "field missing in row",
        with_line(golden, 7, |l| l.rsplit_once(',').unwrap().0.to_string()),
    ));
    out.push(("non-numeric value", replace_field(golden, 3, 3, "abc")));
    out.push(("NaN value", replace_field(golden, 4, 4, "NaN")));
    out.push(("infinite value", replace_field(golden, 4, 5, "inf")));
    out.push(("negative index", replace_field(golden, 9, 1, "-1")));
    out.push(("fractional index", replace_field(golden, 9, 2, "1.5")));
    out.push(("index out of pattern", replace_field(golden, 12, 2, "9")));
    out.push(("comma decimal separator", replace_field(golden, 12, 3, "0,5")));

    let mut l = base.clone();
    l.insert(15, String::new());
    out.push(("blank line", join(&l)));

    out.push(("CRLF line endings", golden.replace('\n', "\r\n")));
    out.push(("empty file", String::new()));
    out.push(("header only", format!("{}\n", base[0])));
    out
}

