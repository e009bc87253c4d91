"""Approximate markup and stylesheet lint under a small, frozen rule set.

Rule set version 1:

    E001 unclosed-element    non-void element without an optional end tag left open
    E002 stray-end-tag       end tag with no matching open element
    E003 misnested-tag       end tag closing an element that is not the innermost open one
    E004 duplicate-id        each repeat of an id value already used
    E005 unknown-element     tag name outside HTML (custom elements and svg/math content exempt)
    W001 img-missing-alt     <img> without an alt attribute
    W002 missing-lang        no <html lang="..."> declaration
    W003 deprecated-element  presentational or obsolete element (font, center, marquee, ...)
    C001 css-parse-error     rule or declaration the CSS tokenizer cannot parse
    C002 css-empty-value     declaration with an empty value
    C101 css-unknown-property  property name not in the known list (custom and vendor-prefixed exempt)
"""
import logging
from collections import Counter
from html.parser import HTMLParser
from typing import Iterable, List, Optional, Sequence, Tuple

import tinycss2

from ..models.audit_models import LintFinding, LintReport
from .onpage import extract_inline_css, extract_style_attributes
from .parser import Document

logger = logging.getLogger(__name__)

LINT_RULESET_VERSION = "1"

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input keygen link meta param source track wbr".split())

OPTIONAL_END_ELEMENTS = frozenset(
    "html head body p li dt dd tr td th thead tbody tfoot option optgroup colgroup caption "
    "rb rt rtc rp".split())

DEPRECATED_ELEMENTS = frozenset(
    "acronym applet basefont big blink center dir font frame frameset isindex marquee nobr "
    "noframes strike tt".split())

KNOWN_ELEMENTS = frozenset(
    "a abbr address area article aside audio b base bdi bdo blockquote body br button canvas "
    "caption cite code col colgroup data datalist dd del details dfn dialog div dl dt em embed "
    "fieldset figcaption figure footer form h1 h2 h3 h4 h5 h6 head header hgroup hr html i iframe "
    "img input ins kbd label legend li link main map mark math menu meta meter nav noscript object "
    "ol optgroup option output p param picture pre progress q rb rp rt rtc ruby s samp script "
    "search section select slot small source span strong style sub summary sup svg table tbody td "
    "template textarea tfoot th thead time title tr track u ul var video wbr".split()
) | DEPRECATED_ELEMENTS | VOID_ELEMENTS

FOREIGN_ROOTS = frozenset({"svg", "math"})

KNOWN_CSS_PROPERTIES = frozenset("""
accent-color align-content align-items align-self all animation animation-delay animation-direction
animation-duration animation-fill-mode animation-iteration-count animation-name animation-play-state
animation-timing-function appearance aspect-ratio backdrop-filter backface-visibility background
background-attachment background-blend-mode background-clip background-color background-image
background-origin background-position background-position-x background-position-y background-repeat
background-size block-size border border-block border-block-end border-block-start border-bottom
border-bottom-color border-bottom-left-radius border-bottom-right-radius border-bottom-style
border-bottom-width border-collapse border-color border-image border-image-outset border-image-repeat
border-image-slice border-image-source border-image-width border-inline border-inline-end
border-inline-start border-left border-left-color border-left-style border-left-width border-radius
border-right border-right-color border-right-style border-right-width border-spacing border-style
border-top border-top-color border-top-left-radius border-top-right-radius border-top-style
border-top-width border-width bottom box-decoration-break box-shadow box-sizing break-after
break-before break-inside caption-side caret-color clear clip clip-path color color-scheme
column-count column-fill column-gap column-rule column-rule-color column-rule-style column-rule-width
column-span column-width columns contain container container-name container-type content
content-visibility counter-increment counter-reset counter-set cursor direction display empty-cells
filter flex flex-basis flex-direction flex-flow flex-grow flex-shrink flex-wrap float font
font-display font-family font-feature-settings font-kerning font-optical-sizing font-size
font-size-adjust font-stretch font-style font-variant font-variant-caps font-variant-ligatures
font-variant-numeric font-variation-settings font-weight gap grid grid-area grid-auto-columns
grid-auto-flow grid-auto-rows grid-column grid-column-end grid-column-gap grid-column-start grid-gap
grid-row grid-row-end grid-row-gap grid-row-start grid-template grid-template-areas
grid-template-columns grid-template-rows height hyphens image-rendering inline-size inset
inset-block inset-inline isolation justify-content justify-items justify-self left letter-spacing
line-break line-height list-style list-style-image list-style-position list-style-type margin
margin-block margin-block-end margin-block-start margin-bottom margin-inline margin-inline-end
margin-inline-start margin-left margin-right margin-top mask mask-image max-block-size max-height
max-inline-size max-width min-block-size min-height min-inline-size min-width mix-blend-mode
object-fit object-position opacity order orphans outline outline-color outline-offset outline-style
outline-width overflow overflow-anchor overflow-wrap overflow-x overflow-y overscroll-behavior
padding padding-block padding-block-end padding-block-start padding-bottom padding-inline
padding-inline-end padding-inline-start padding-left padding-right padding-top page-break-after
page-break-before page-break-inside perspective perspective-origin place-content place-items
place-self pointer-events position print-color-adjust quotes resize right rotate row-gap scale
scroll-behavior scroll-margin scroll-margin-top scroll-padding scroll-padding-top scroll-snap-align
scroll-snap-type scrollbar-color scrollbar-gutter scrollbar-width shape-outside speak src tab-size
table-layout text-align text-align-last text-decoration text-decoration-color text-decoration-line
text-decoration-style text-decoration-thickness text-emphasis text-indent text-justify
text-orientation text-overflow text-rendering text-shadow text-size-adjust text-transform
text-underline-offset text-underline-position top touch-action transform transform-origin
transform-style transition transition-delay transition-duration transition-property
transition-timing-function translate unicode-bidi unicode-range user-select vertical-align
visibility white-space widows width will-change word-break word-spacing word-wrap writing-mode
z-index zoom
""".split())


class _MarkupScanner(HTMLParser):
    """Tag-stack walk over the raw markup collecting rule violations."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack: List[str] = []
        self.ids: Counter = Counter()
        self.findings: List[LintFinding] = []
        self.lang_declared = False
        self.seen_html = False

    def _add(self, code: str, severity: str, message: str) -> None:
        self.findings.append(LintFinding(code=code, severity=severity, message=message))

    def _in_foreign(self) -> bool:
        return any(tag in FOREIGN_ROOTS for tag in self.stack)

    def _open(self, tag: str, attrs: List[Tuple[str, Optional[str]]], push: bool) -> None:
        attributes = dict(attrs)
        if tag == "html" and not self.seen_html:
            self.seen_html = True
            self.lang_declared = bool((attributes.get("lang") or "").strip())
        element_id = (attributes.get("id") or "").strip()
        if element_id:
            self.ids[element_id] += 1
            if self.ids[element_id] > 1:
                self._add("E004", "error", f"duplicate id '{element_id}'")
        if tag not in KNOWN_ELEMENTS and "-" not in tag and not self._in_foreign():
            self._add("E005", "error", f"unknown element <{tag}>")
        if tag in DEPRECATED_ELEMENTS:
            self._add("W003", "warning", f"deprecated element <{tag}>")
        if tag == "img" and "alt" not in attributes:
            self._add("W001", "warning", "img without alt attribute")
        if push and tag not in VOID_ELEMENTS:
            self.stack.append(tag)

    def handle_starttag(self, tag, attrs):
        self._open(tag, attrs, push=True)

    def handle_startendtag(self, tag, attrs):
        self._open(tag, attrs, push=False)

    def handle_endtag(self, tag):
        if tag in VOID_ELEMENTS:
            return
        if tag not in self.stack:
            self._add("E002", "error", f"stray end tag </{tag}>")
            return
        index = len(self.stack) - 1 - self.stack[::-1].index(tag)
        between = self.stack[index + 1:]
        if all(t in OPTIONAL_END_ELEMENTS for t in between):
            del self.stack[index:]
        else:
            # innermost non-optional elements stay open
            self._add("E003", "error", f"</{tag}> closes <{tag}> while <{between[-1]}> is open")
            del self.stack[index]

    def finish(self) -> None:
        self.close()
        for tag in self.stack:
            if tag not in OPTIONAL_END_ELEMENTS:
                self._add("E001", "error", f"<{tag}> never closed")
        if not self.lang_declared:
            self._add("W002", "warning", "no lang attribute on <html>")


def _meaningful(tokens: Iterable) -> list:
    return [t for t in tokens if t.type not in ("whitespace", "comment")]


def _lint_declarations(content, findings: List[LintFinding]) -> None:
    for node in tinycss2.parse_declaration_list(content, skip_comments=True, skip_whitespace=True):
        if node.type == "error":
            findings.append(LintFinding(code="C001", severity="error", message=f"CSS: {node.message}"))
        elif node.type == "declaration":
            if not _meaningful(node.value):
                findings.append(LintFinding(code="C002", severity="error",
                                            message=f"CSS: empty value for '{node.lower_name}'"))
            name = node.lower_name
            if not name.startswith("-") and name not in KNOWN_CSS_PROPERTIES:
                findings.append(LintFinding(code="C101", severity="warning",
                                            message=f"CSS: unknown property '{name}'"))


def _lint_rules(nodes, findings: List[LintFinding]) -> None:
    for node in nodes:
        if node.type == "error":
            findings.append(LintFinding(code="C001", severity="error", message=f"CSS: {node.message}"))
        elif node.type == "qualified-rule":
            _lint_declarations(node.content, findings)
        elif node.type == "at-rule" and node.content is not None:
            if node.lower_at_keyword in ("media", "supports", "document", "layer", "container"):
                _lint_rules(tinycss2.parse_rule_list(node.content, skip_comments=True,
                                                     skip_whitespace=True), findings)
            elif node.lower_at_keyword in ("font-face", "page"):
                _lint_declarations(node.content, findings)


def lint_css(stylesheets: Sequence[str], style_attributes: Sequence[str] = ()) -> List[LintFinding]:
    """Findings for stylesheet texts and inline style attribute values.

    A text without any '{' is treated as a bare declaration list.
    """
    findings: List[LintFinding] = []
    for css in stylesheets:
        if "{" in css:
            _lint_rules(tinycss2.parse_stylesheet(css, skip_comments=True, skip_whitespace=True), findings)
        else:
            _lint_declarations(css, findings)
    for declarations in style_attributes:
        _lint_declarations(declarations, findings)
    return findings


def lint_markup(data: bytes, doc: Optional[Document] = None,
                stylesheets: Sequence[str] = ()) -> LintReport:
    """Count HTML and CSS rule violations.

    Args:
        data: Raw page bytes.
        doc: The parsed page; supplies the decoding plus inline <style> and style attributes.
        stylesheets: Texts of external stylesheets.
    """
    encoding = (doc.soup.original_encoding if doc is not None else None) or "utf-8"
    try:
        text = data.decode(encoding, errors="replace")
    except LookupError:
        text = data.decode("utf-8", errors="replace")

    scanner = _MarkupScanner()
    scanner.feed(text)
    scanner.finish()

    inline = extract_inline_css(doc) if doc is not None else []
    attributes = extract_style_attributes(doc) if doc is not None else []
    findings = scanner.findings + lint_css(list(stylesheets) + inline, attributes)

    by_kind = Counter(
        ("css" if f.code.startswith("C") else "html", f.severity) for f in findings
    )
    return LintReport(
        ruleset_version=LINT_RULESET_VERSION,
        html_errors=by_kind[("html", "error")],
        html_warnings=by_kind[("html", "warning")],
        css_errors=by_kind[("css", "error")],
        css_warnings=by_kind[("css", "warning")],
        findings=tuple(findings),
    )
