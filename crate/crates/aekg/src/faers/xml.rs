//! Streaming FAERS XML parser.
//!
//! The reader yields one [`SafetyReport`] per `safetyreport` element and
//! never buffers more than the report currently being assembled, so peak
//! memory is bounded by the largest single report, not the file.
//!
//! Element names are matched case-insensitively on their local part.
//! Outside a report, elements are transparent containers (descended into
//! and tallied when unrecognized) so reports are found at any depth.
//! Inside a report, any element that does not map to a canonical field is
//! skipped as a whole subtree and tallied. Field values that violate the
//! domain invariants (non-numeric onset age, age group outside 1-6, drugs
//! without a product name) are dropped and tallied as irregular rather
//! than aborting the batch.

use crate::model::{DrugRecord, ReactionRecord, SafetyReport};
use quick_xml::events::Event;
use quick_xml::Reader;
use std::io::BufRead;

#[derive(Debug, thiserror::Error)]
pub enum XmlError {
    #[error("malformed XML at byte offset {offset}: {message}")]
    Malformed { offset: u64, message: String },
    #[error("missing root element: document contains no elements")]
    MissingRoot,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses a whole document; convenience wrapper over [`FaersXmlReader`].
pub fn parse_faers_xml<R: BufRead>(input: R) -> Result<Vec<SafetyReport>, XmlError> {
    let mut reader = FaersXmlReader::new(input);
    let mut reports = Vec::new();
    for report in &mut reader {
        reports.push(report?);
    }
    Ok(reports)
}

// Character references plus the five predefined XML entities; anything
// else is undeclared and malformed.
fn resolve_entity(r: &quick_xml::events::BytesRef<'_>) -> Result<char, String> {
    match r.resolve_char_ref() {
        Ok(Some(c)) => return Ok(c),
        Ok(None) => {}
        Err(e) => return Err(e.to_string()),
    }
    let name: &[u8] = r;
    match name {
        b"lt" => Ok('<'),
        b"gt" => Ok('>'),
        b"amp" => Ok('&'),
        b"apos" => Ok('\''),
        b"quot" => Ok('"'),
        other => Err(format!(
            "unknown entity &{};",
            String::from_utf8_lossy(other)
        )),
    }
}

// Where the cursor sits within the recognized report grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Report,
    Patient,
    Drug,
    Substance,
    Reaction,
}

// What to do with an element opening inside a report.
enum FieldAction {
    Enter(Section),
    Capture,
    Skip,
}

/// Streaming report iterator. After iteration, [`skipped_elements`] and
/// [`irregular_fields`] expose the unmapped-element and dropped-value
/// tallies.
///
/// [`skipped_elements`]: FaersXmlReader::skipped_elements
/// [`irregular_fields`]: FaersXmlReader::irregular_fields
pub struct FaersXmlReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    saw_root: bool,
    depth: usize,
    stack: Vec<Section>,
    current: Option<SafetyReport>,
    drug: Option<DrugRecord>,
    reaction_term: Option<String>,
    skipped_elements: u64,
    irregular_fields: u64,
    finished: bool,
}

impl<R: BufRead> FaersXmlReader<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        // Text is trimmed once per assembled field value, not per event:
        // entity references split text into fragments and per-fragment
        // trimming would eat interior whitespace.
        reader.config_mut().expand_empty_elements = true;
        FaersXmlReader {
            reader,
            buf: Vec::new(),
            saw_root: false,
            depth: 0,
            stack: Vec::new(),
            current: None,
            drug: None,
            reaction_term: None,
            skipped_elements: 0,
            irregular_fields: 0,
            finished: false,
        }
    }

    /// Count of elements not mapped to a canonical field.
    pub fn skipped_elements(&self) -> u64 {
        self.skipped_elements
    }

    /// Count of values dropped for violating field invariants.
    pub fn irregular_fields(&self) -> u64 {
        self.irregular_fields
    }

    fn malformed(&self, message: impl Into<String>) -> XmlError {
        // buffer_position is the current byte offset, which also covers
        // errors synthesized here (truncation, unknown entities) where the
        // reader itself saw no syntax error.
        XmlError::Malformed {
            offset: self.reader.buffer_position(),
            message: message.into(),
        }
    }

    fn local_name_lower(name: quick_xml::name::QName<'_>) -> String {
        String::from_utf8_lossy(name.local_name().as_ref()).to_ascii_lowercase()
    }

    // Consume events until the element just opened is closed.
    fn skip_subtree(&mut self) -> Result<(), XmlError> {
        let mut depth = 1usize;
        loop {
            self.buf.clear();
            match self.reader.read_event_into(&mut self.buf) {
                Ok(Event::Start(_)) => depth += 1,
                Ok(Event::End(_)) => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Ok(Event::Eof) => {
                    return Err(self.malformed("unexpected end of file inside skipped element"))
                }
                Ok(_) => {}
                Err(e) => return Err(self.malformed(e.to_string())),
            }
        }
    }

    // A capture field is a leaf: consume its text and closing tag inline,
    // then store the value. Nested markup inside a scalar field is not
    // canonical and is skipped.
    fn capture_leaf(&mut self, name: &str) -> Result<(), XmlError> {
        let mut text = String::new();
        loop {
            self.buf.clear();
            match self.reader.read_event_into(&mut self.buf) {
                Ok(Event::Text(t)) => match t.decode() {
                    Ok(v) => text.push_str(&v),
                    Err(e) => return Err(self.malformed(e.to_string())),
                },
                Ok(Event::CData(c)) => text.push_str(&String::from_utf8_lossy(&c)),
                Ok(Event::GeneralRef(r)) => match resolve_entity(&r) {
                    Ok(c) => text.push(c),
                    Err(message) => return Err(self.malformed(message)),
                },
                Ok(Event::End(_)) => break,
                Ok(Event::Start(_)) => {
                    self.skipped_elements += 1;
                    self.skip_subtree()?;
                }
                Ok(Event::Eof) => {
                    return Err(self.malformed("unexpected end of file inside element"))
                }
                Ok(_) => {}
                Err(e) => return Err(self.malformed(e.to_string())),
            }
        }
        let trimmed = text.trim();
        let value = if trimmed.is_empty() {
            None
        } else {
            Some(trimmed.to_string())
        };
        self.store_field(name, value);
        Ok(())
    }

    fn open_field(&self, name: &str) -> FieldAction {
        match (self.stack.last().copied(), name) {
            (Some(Section::Report), "patient") => FieldAction::Enter(Section::Patient),
            (Some(Section::Report), "safetyreportid" | "receivedate" | "serious") => {
                FieldAction::Capture
            }
            (Some(Section::Patient), "drug") => FieldAction::Enter(Section::Drug),
            (Some(Section::Patient), "reaction") => FieldAction::Enter(Section::Reaction),
            (
                Some(Section::Patient),
                "patientonsetage" | "patientonsetageunit" | "patientagegroup" | "patientsex",
            ) => FieldAction::Capture,
            (Some(Section::Drug), "activesubstance") => FieldAction::Enter(Section::Substance),
            (Some(Section::Drug), "medicinalproduct" | "drugcharacterization") => {
                FieldAction::Capture
            }
            (Some(Section::Substance), "activesubstancename") => FieldAction::Capture,
            (Some(Section::Reaction), "reactionmeddrapt") => FieldAction::Capture,
            _ => FieldAction::Skip,
        }
    }

    fn store_field(&mut self, name: &str, text: Option<String>) {
        match (self.stack.last().copied(), name) {
            (Some(Section::Report), "safetyreportid") => {
                if let (Some(report), Some(v)) = (self.current.as_mut(), text) {
                    report.report_id = v;
                }
            }
            (Some(Section::Report), "receivedate") => {
                if let Some(report) = self.current.as_mut() {
                    report.receive_date = text;
                }
            }
            (Some(Section::Report), "serious") => {
                if let Some(report) = self.current.as_mut() {
                    report.serious = text;
                }
            }
            (Some(Section::Patient), "patientonsetage") => match text {
                Some(v)
                    if v.parse::<f64>()
                        .map(|n| n >= 0.0 && n.is_finite())
                        .unwrap_or(false) =>
                {
                    if let Some(report) = self.current.as_mut() {
                        report.patient.onset_age = Some(v);
                    }
                }
                Some(_) => self.irregular_fields += 1,
                None => {}
            },
            (Some(Section::Patient), "patientonsetageunit") => {
                if let Some(report) = self.current.as_mut() {
                    report.patient.onset_age_unit = text;
                }
            }
            (Some(Section::Patient), "patientagegroup") => match text {
                Some(v) if matches!(v.as_str(), "1" | "2" | "3" | "4" | "5" | "6") => {
                    if let Some(report) = self.current.as_mut() {
                        report.patient.age_group = Some(v);
                    }
                }
                Some(_) => self.irregular_fields += 1,
                None => {}
            },
            (Some(Section::Patient), "patientsex") => {
                if let Some(report) = self.current.as_mut() {
                    report.patient.sex = text;
                }
            }
            (Some(Section::Drug), "medicinalproduct") => {
                if let (Some(drug), Some(v)) = (self.drug.as_mut(), text) {
                    drug.medicinal_product = v;
                }
            }
            (Some(Section::Drug), "drugcharacterization") => {
                if let Some(drug) = self.drug.as_mut() {
                    drug.characterization = text;
                }
            }
            (Some(Section::Substance), "activesubstancename") => {
                if let (Some(drug), Some(v)) = (self.drug.as_mut(), text) {
                    drug.active_substances.push(v);
                }
            }
            (Some(Section::Reaction), "reactionmeddrapt") => self.reaction_term = text,
            _ => {}
        }
    }

    // Returns a finished report when the closed section was the report.
    fn close_section(&mut self, section: Section) -> Option<SafetyReport> {
        match section {
            Section::Report => return self.current.take(),
            Section::Drug => {
                if let Some(drug) = self.drug.take() {
                    if drug.medicinal_product.trim().is_empty() {
                        self.irregular_fields += 1;
                    } else if let Some(report) = self.current.as_mut() {
                        report.patient.drugs.push(drug);
                    }
                }
            }
            Section::Reaction => match self.reaction_term.take() {
                Some(term) => {
                    if let Some(report) = self.current.as_mut() {
                        report.patient.reactions.push(ReactionRecord { term });
                    }
                }
                None => self.irregular_fields += 1,
            },
            Section::Patient | Section::Substance => {}
        }
        None
    }
}

impl<R: BufRead> Iterator for FaersXmlReader<R> {
    type Item = Result<SafetyReport, XmlError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev,
                Err(e) => {
                    self.finished = true;
                    return Some(Err(self.malformed(e.to_string())));
                }
            };
            match event {
                Event::Start(start) => {
                    let name = Self::local_name_lower(start.name());
                    self.saw_root = true;
                    if self.stack.is_empty() {
                        // Outside any report: report elements begin a report,
                        // everything else is a transparent container so that
                        // reports are recognized at any depth. The root
                        // element itself is expected structure.
                        self.depth += 1;
                        if name == "safetyreport" {
                            self.stack.push(Section::Report);
                            self.current = Some(SafetyReport::default());
                        } else if self.depth > 1 {
                            self.skipped_elements += 1;
                        }
                    } else {
                        let result = match self.open_field(&name) {
                            FieldAction::Enter(section) => {
                                self.depth += 1;
                                if section == Section::Drug {
                                    self.drug = Some(DrugRecord::default());
                                }
                                self.stack.push(section);
                                Ok(())
                            }
                            FieldAction::Capture => self.capture_leaf(&name),
                            FieldAction::Skip => {
                                self.skipped_elements += 1;
                                self.skip_subtree()
                            }
                        };
                        if let Err(e) = result {
                            self.finished = true;
                            return Some(Err(e));
                        }
                    }
                }
                Event::End(_) => {
                    if self.depth == 0 {
                        self.finished = true;
                        return Some(Err(self.malformed("unbalanced closing tag")));
                    }
                    self.depth -= 1;
                    if let Some(section) = self.stack.pop() {
                        if let Some(report) = self.close_section(section) {
                            return Some(Ok(report));
                        }
                    }
                }
                Event::Eof => {
                    self.finished = true;
                    if !self.saw_root {
                        return Some(Err(XmlError::MissingRoot));
                    }
                    if self.depth != 0 {
                        return Some(Err(
                            self.malformed("unexpected end of file: unclosed element")
                        ));
                    }
                    return None;
                }
                _ => {}
            }
        }
    }
}
