use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Md,
    Json,
}

/// A rendered command result: Markdown prose plus one machine-readable block.
#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub body: String,
    pub data: Value,
    pub ok: bool,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            body: String::new(),
            data: Value::Object(Default::default()),
            ok: true,
        }
    }

    pub fn section(&mut self, heading: &str, text: impl AsRef<str>) {
        self.body.push_str(&format!("## {heading}\n\n{}\n\n", text.as_ref().trim_end()));
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data
            .as_object_mut()
            .expect("report data is an object")
            .insert(key.to_string(), v);
    }

    pub fn render(&self, format: Format) -> String {
        let json = serde_json::to_string_pretty(&self.data).expect("report data serializes");
        match format {
            Format::Json => format!("{json}\n"),
            Format::Md => format!("# {}\n\n{}```json\n{json}\n```\n", self.title, self.body),
        }
    }
}

/// Markdown table.
pub fn table<S: AsRef<str>>(headers: &[&str], rows: &[Vec<S>]) -> String {
    let mut out = format!("| {} |\n|{}\n", headers.join(" | "), "---|".repeat(headers.len()));
    for r in rows {
        let cells: Vec<&str> = r.iter().map(|c| c.as_ref()).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// One checked expectation of a casebook entry.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Check {
    pub fn eq(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Check {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check {
            name: name.into(),
            ok: expected == actual,
            expected,
            actual,
        }
    }
}

pub fn checks_table(checks: &[Check]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.expected.clone(),
                c.actual.clone(),
                if c.ok { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    table(&["check", "expected", "actual", "status"], &rows)
}
