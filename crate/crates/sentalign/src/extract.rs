//! Main-content extraction from archived HTML through declarative templates.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use scraper::{ElementRef, Html, Node, Selector};
use sentalign_core::text::flatten_enumerations;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-source extraction rules. Rules are CSS selectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTemplate {
    pub source: String,
    pub content_rules: Vec<String>,
    #[serde(default)]
    pub exclude_rules: Vec<String>,
}

impl ExtractionTemplate {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        let template: ExtractionTemplate =
            toml::from_str(&text).map_err(|e| Error::Toml { path: path.to_path_buf(), message: e.to_string() })?;
        template.compile()?;
        Ok(template)
    }

    fn compile(&self) -> Result<Compiled> {
        if self.content_rules.is_empty() {
            return Err(Error::Template(format!("{}: at least one content rule is required", self.source)));
        }
        let parse = |rules: &[String]| {
            rules
                .iter()
                .map(|r| {
                    Selector::parse(r).map_err(|e| Error::Template(format!("{}: bad rule {r:?}: {e}", self.source)))
                })
                .collect::<Result<Vec<_>>>()
        };
        Ok(Compiled { content: parse(&self.content_rules)?, exclude: parse(&self.exclude_rules)? })
    }
}

struct Compiled {
    content: Vec<Selector>,
    exclude: Vec<Selector>,
}

const SKIPPED: &[&str] = &[
    "script", "style", "noscript", "template", "head", "img", "picture", "figure", "svg", "video", "audio", "iframe",
    "object", "embed", "canvas", "map",
];

const BLOCKS: &[&str] = &[
    "p",
    "div",
    "section",
    "article",
    "main",
    "header",
    "footer",
    "aside",
    "nav",
    "blockquote",
    "pre",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "table",
    "tr",
    "td",
    "th",
    "thead",
    "tbody",
    "dl",
    "dt",
    "dd",
    "li",
    "br",
    "hr",
    "address",
    "details",
    "summary",
    "form",
    "fieldset",
    "body",
];

struct Renderer<'t> {
    rules: &'t Compiled,
    blocks: Vec<String>,
    current: String,
}

fn collapse(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl Renderer<'_> {
    fn excluded(&self, el: &ElementRef<'_>) -> bool {
        SKIPPED.contains(&el.value().name()) || self.rules.exclude.iter().any(|s| s.matches(el))
    }

    fn flush(&mut self) {
        let block = collapse(&self.current);
        if !block.is_empty() {
            self.blocks.push(block);
        }
        self.current.clear();
    }

    /// Inline text of `el`, with nested lists flattened in place.
    fn inline_text(&self, el: ElementRef<'_>, out: &mut String) {
        for child in el.children() {
            match child.value() {
                Node::Text(t) => out.push_str(t),
                Node::Element(_) => {
                    let child = ElementRef::wrap(child).expect("element node");
                    if self.excluded(&child) {
                        continue;
                    }
                    match child.value().name() {
                        "ul" | "ol" => {
                            out.push(' ');
                            out.push_str(&self.list_text(child));
                            out.push(' ');
                        }
                        "br" => out.push(' '),
                        _ => self.inline_text(child, out),
                    }
                }
                _ => {}
            }
        }
    }

    fn list_text(&self, list: ElementRef<'_>) -> String {
        let items: Vec<String> = list
            .children()
            .filter_map(ElementRef::wrap)
            .filter(|item| item.value().name() == "li" && !self.excluded(item))
            .map(|item| {
                let mut text = String::new();
                self.inline_text(item, &mut text);
                collapse(&text)
            })
            .collect();
        flatten_enumerations(&items)
    }

    fn render(&mut self, el: ElementRef<'_>) {
        for child in el.children() {
            match child.value() {
                Node::Text(t) => self.current.push_str(t),
                Node::Element(_) => {
                    let child = ElementRef::wrap(child).expect("element node");
                    if self.excluded(&child) {
                        continue;
                    }
                    let name = child.value().name();
                    if name == "ul" || name == "ol" {
                        self.flush();
                        let text = self.list_text(child);
                        self.current.push_str(&text);
                        self.flush();
                    } else if BLOCKS.contains(&name) {
                        self.flush();
                        self.render(child);
                        self.flush();
                    } else {
                        self.render(child);
                    }
                }
                _ => {}
            }
        }
    }
}

/// Text of all main-content blocks, one block per line.
///
/// Fails with [`Error::Unusable`] when no content rule matches or the matched
/// blocks hold no text after exclusions.
pub fn extract_text(html: &str, template: &ExtractionTemplate) -> Result<String> {
    let rules = template.compile()?;
    let document = Html::parse_document(html);
    let mut roots = Vec::new();
    let mut chosen = HashSet::new();
    for node in document.root_element().descendants() {
        let Some(el) = ElementRef::wrap(node) else { continue };
        if !rules.content.iter().any(|s| s.matches(&el)) {
            continue;
        }
        let inside_chosen = el.ancestors().any(|a| chosen.contains(&a.id()));
        let inside_excluded =
            el.ancestors().filter_map(ElementRef::wrap).any(|a| rules.exclude.iter().any(|s| s.matches(&a)));
        if !inside_chosen && !inside_excluded && !rules.exclude.iter().any(|s| s.matches(&el)) {
            chosen.insert(el.id());
            roots.push(el);
        }
    }
    if roots.is_empty() {
        return Err(Error::Unusable("no content block matched".into()));
    }
    let mut renderer = Renderer { rules: &rules, blocks: Vec::new(), current: String::new() };
    for root in roots {
        renderer.flush();
        if root.value().name() == "ul" || root.value().name() == "ol" {
            let text = renderer.list_text(root);
            renderer.current.push_str(&text);
        } else {
            renderer.render(root);
        }
        renderer.flush();
    }
    if renderer.blocks.is_empty() {
        return Err(Error::Unusable("content blocks hold no text".into()));
    }
    Ok(renderer.blocks.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template(content: &[&str], exclude: &[&str]) -> ExtractionTemplate {
        ExtractionTemplate {
            source: "t".into(),
            content_rules: content.iter().map(|s| s.to_string()).collect(),
            exclude_rules: exclude.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn single_paragraph() {
        let html = "<html><body><p>Hallo Welt.</p></body></html>";
        assert_eq!(extract_text(html, &template(&["body"], &[])).unwrap(), "Hallo Welt.");
    }

    #[test]
    fn footer_only_is_unusable() {
        let html = "<html><body><footer><p>Impressum und Datenschutz</p></footer></body></html>";
        let err = extract_text(html, &template(&["body"], &["footer"])).unwrap_err();
        assert!(matches!(err, Error::Unusable(_)));
        let err = extract_text(html, &template(&["article"], &[])).unwrap_err();
        assert!(matches!(err, Error::Unusable(_)));
    }

    #[test]
    fn lists_become_comma_text() {
        let html = "<main><p>Wir brauchen:</p><ul><li>Äpfel</li><li>Birnen</li><li>Nüsse</li></ul>\
                    <img alt='Bild'><script>var x = 1;</script></main>";
        let text = extract_text(html, &template(&["main"], &[])).unwrap();
        assert_eq!(text, "Wir brauchen:\nÄpfel, Birnen, Nüsse.");
    }

    #[test]
    fn nested_roots_are_rendered_once() {
        let html = "<div class='c'><div class='c'><p>Eins.</p></div><p>Zwei <b>fett</b>.</p><nav>Menü</nav></div>";
        let text = extract_text(html, &template(&[".c"], &["nav"])).unwrap();
        assert_eq!(text, "Eins.\nZwei fett.");
    }

    #[test]
    fn empty_template_is_rejected() {
        assert!(matches!(extract_text("<p>x</p>", &template(&[], &[])), Err(Error::Template(_))));
        assert!(matches!(extract_text("<p>x</p>", &template(&["p["], &[])), Err(Error::Template(_))));
    }
}
