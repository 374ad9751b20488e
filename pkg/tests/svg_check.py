"""Structural SVG 1.1 check with the standard library.

No DTD validator is installed, so this checks the subset the diagrams use:
namespace, root attributes, a whitelist of SVG 1.1 elements with their
permitted attributes, numeric coordinates and the absence of external
references.
"""

import re
import xml.etree.ElementTree as ET

SVG_NS = "http://www.w3.org/2000/svg"

PRESENTATION = {
    "fill", "stroke", "stroke-width", "stroke-dasharray", "stroke-linecap", "stroke-linejoin",
    "opacity", "font-family", "font-size", "text-anchor",
}
CORE = {"id"}
ELEMENTS = {
    "svg": CORE | PRESENTATION | {"version", "width", "height", "viewBox"},
    "title": CORE,
    "desc": CORE,
    "g": CORE | PRESENTATION,
    "rect": CORE | PRESENTATION | {"x", "y", "width", "height"},
    "line": CORE | PRESENTATION | {"x1", "y1", "x2", "y2"},
    "text": CORE | PRESENTATION | {"x", "y"},
}
CONTENT = {
    "svg": {"title", "desc", "g", "rect", "line", "text"},
    "g": {"g", "rect", "line", "text", "title", "desc"},
    "title": set(), "desc": set(), "rect": set(), "line": set(), "text": set(),
}
NUMERIC = {"x", "y", "x1", "y1", "x2", "y2", "width", "height", "stroke-width", "font-size"}
NUMBER = re.compile(r"^-?\d+(\.\d+)?$")


def validate_svg(text: str) -> list[str]:
    """Problems found; an empty list means the document passes."""
    problems = []
    if not text.startswith("<?xml"):
        problems.append("missing XML declaration")
    if "xlink:href" in text or "href=" in text or "<script" in text:
        problems.append("external reference or script")
    try:
        root = ET.fromstring(text.encode("utf-8"))
    except ET.ParseError as exc:
        return problems + [f"not well-formed: {exc}"]
    if root.tag != f"{{{SVG_NS}}}svg":
        problems.append(f"root element is {root.tag}")
    if root.get("version") != "1.1":
        problems.append("root version is not 1.1")
    if root.get("viewBox") != "0 0 1000 1000":
        problems.append("unexpected viewBox")

    def walk(el, parent):
        if not el.tag.startswith(f"{{{SVG_NS}}}"):
            problems.append(f"foreign element {el.tag}")
            return
        name = el.tag.split("}", 1)[1]
        if name not in ELEMENTS:
            problems.append(f"element {name} not allowed")
            return
        if parent is not None and name not in CONTENT[parent]:
            problems.append(f"{name} not allowed inside {parent}")
        for attr, value in el.attrib.items():
            if attr not in ELEMENTS[name]:
                problems.append(f"attribute {attr} not allowed on {name}")
            if attr in NUMERIC and not NUMBER.match(value):
                problems.append(f"{name}@{attr}={value!r} is not a number")
        for child in el:
            walk(child, name)

    walk(root, None)
    return problems
