"""On-page metric extraction and resource discovery."""
from typing import Iterable, List, Optional, Sequence
from urllib.parse import urljoin, urlsplit

from ..core import constants
from ..models.audit_models import OnPageMetrics
from .parser import Document

_SKIPPED_SCHEMES = ("javascript:", "mailto:", "tel:", "data:")


def _base_url(doc: Document, page_url: str) -> str:
    return urljoin(page_url, doc.base_href) if doc.base_href else page_url


def _site_host(page_url: str) -> str:
    host = (urlsplit(page_url).hostname or "").lower()
    return host[4:] if host.startswith("www.") else host


def host_matches(host: str, domain: str) -> bool:
    """True when host is the domain or a subdomain of it."""
    host, domain = host.lower(), domain.lower()
    return host == domain or host.endswith("." + domain)


def extract_link_urls(doc: Document, page_url: str) -> List[str]:
    """Absolute http(s) URLs of anchor hrefs in document order.

    Empty, fragment-only and non-web (javascript:, mailto:, tel:, data:) hrefs are skipped.
    """
    base = _base_url(doc, page_url)
    urls = []
    for anchor in doc.soup.find_all("a", href=True):
        href = anchor["href"].strip()
        if not href or href.startswith("#") or href.lower().startswith(_SKIPPED_SCHEMES):
            continue
        url = urljoin(base, href)
        if urlsplit(url).scheme in ("http", "https") and urlsplit(url).hostname:
            urls.append(url)
    return urls


def _absolute(doc: Document, page_url: str, values: Iterable[Optional[str]]) -> List[str]:
    base = _base_url(doc, page_url)
    out = []
    for value in values:
        if not value or not value.strip():
            continue
        url = urljoin(base, value.strip())
        if urlsplit(url).scheme in ("http", "https"):
            out.append(url)
    return out


def extract_stylesheet_urls(doc: Document, page_url: str) -> List[str]:
    links = [
        link.get("href") for link in doc.soup.find_all("link", href=True)
        if "stylesheet" in [r.lower() for r in (link.get("rel") or [])]
    ]
    return _absolute(doc, page_url, links)


def extract_subresources(doc: Document, page_url: str) -> List[str]:
    """Images, scripts, stylesheets and frames the page asks the browser to load."""
    soup = doc.soup
    sources = [img.get("src") for img in soup.find_all("img")]
    sources += [script.get("src") for script in soup.find_all("script")]
    sources += [iframe.get("src") for iframe in soup.find_all("iframe")]
    return _absolute(doc, page_url, sources) + extract_stylesheet_urls(doc, page_url)


def extract_inline_css(doc: Document) -> List[str]:
    """Contents of <style> blocks."""
    return [style.get_text() for style in doc.soup.find_all("style")]


def extract_style_attributes(doc: Document) -> List[str]:
    return [tag["style"] for tag in doc.soup.find_all(style=True)]


def extract_onpage(doc: Document, page_url: str,
                   social_domains: Optional[Sequence[str]] = None) -> OnPageMetrics:
    """Compute the on-page metrics of a parsed home page.

    Args:
        doc: Parsed page.
        page_url: Final URL of the page, used to resolve links and split internal/external.
        social_domains: Hosts counted as social media; defaults to the built-in list.
    """
    social_domains = list(constants.DEFAULT_SOCIAL_DOMAINS if social_domains is None else social_domains)
    soup = doc.soup

    title = soup.find("title")
    title_text = title.get_text().strip() if title is not None else ""

    description = ""
    for meta in soup.find_all("meta"):
        if (meta.get("name") or "").strip().lower() == "description":
            description = (meta.get("content") or "").strip()
            break

    viewport = any((meta.get("name") or "").strip().lower() == "viewport" for meta in soup.find_all("meta"))

    site = _site_host(page_url)
    internal = external = social = 0
    for url in extract_link_urls(doc, page_url):
        host = urlsplit(url).hostname or ""
        if host_matches(host, site):
            internal += 1
        else:
            external += 1
        if any(host_matches(host, domain) for domain in social_domains):
            social += 1

    return OnPageMetrics(
        title_chars=len(title_text),
        meta_description_chars=len(description),
        h1_count=len(soup.find_all("h1")),
        img_without_alt=sum(1 for img in soup.find_all("img") if not img.has_attr("alt")),
        iframe_count=len(soup.find_all("iframe")),
        embed_object_count=len(soup.find_all(["embed", "object"])),
        doctype=doc.has_doctype,
        encoding_declared=doc.declared_encoding is not None,
        language_english=(doc.lang or "").strip().lower().startswith("en"),
        responsive=viewport,
        internal_links=internal,
        external_links=external,
        total_links=internal + external,
        social_media=social,
    )
