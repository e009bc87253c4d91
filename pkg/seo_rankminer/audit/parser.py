"""Tolerant HTML parsing into a Document."""
import logging
import re
from dataclasses import dataclass
from typing import Optional

from bs4 import BeautifulSoup, Doctype

logger = logging.getLogger(__name__)

_CHARSET_IN_CONTENT = re.compile(r"charset\s*=\s*['\"]?([\w.:-]+)", re.IGNORECASE)


@dataclass(frozen=True)
class Document:
    """A parsed page: the element tree plus declarations found in the markup."""
    soup: BeautifulSoup
    doctype: Optional[str]
    declared_encoding: Optional[str]
    base_href: Optional[str]
    lang: Optional[str]

    @property
    def has_doctype(self) -> bool:
        return self.doctype is not None


def _declared_encoding(soup: BeautifulSoup) -> Optional[str]:
    for meta in soup.find_all("meta"):
        charset = meta.get("charset")
        if charset and charset.strip():
            return charset.strip().lower()
        if (meta.get("http-equiv") or "").strip().lower() == "content-type":
            match = _CHARSET_IN_CONTENT.search(meta.get("content") or "")
            if match:
                return match.group(1).lower()
    return None


def parse_html(data: bytes, encoding_hint: Optional[str] = None) -> Document:
    """Parse raw page bytes, recovering from unclosed and misnested tags.

    Args:
        data: Response body.
        encoding_hint: Charset from the HTTP Content-Type header, if any.

    Returns:
        The Document; never raises on malformed markup.
    """
    soup = BeautifulSoup(data, "html.parser", from_encoding=encoding_hint)

    doctype = next((str(node).strip() for node in soup.contents if isinstance(node, Doctype)), None)

    html = soup.find("html")
    lang = (html.get("lang") or "").strip() if html is not None else ""

    base = soup.find("base", href=True)
    base_href = base["href"].strip() if base is not None else None

    if soup.original_encoding:
        logger.debug(f"Decoded page as {soup.original_encoding}")

    return Document(
        soup=soup,
        doctype=doctype,
        declared_encoding=_declared_encoding(soup),
        base_href=base_href or None,
        lang=lang or None,
    )
