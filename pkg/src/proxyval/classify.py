"""Keyword rules that flag therapeutic products as disease-onset signals."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import KeywordConfigError, UnknownProductId
from .ingest import Category, ProductEntry, normalize_token


class CategoryRule(str, Enum):
    THERAPEUTIC_ONLY = "therapeutic_only"
    ANY = "any"


@dataclass(frozen=True)
class KeywordRuleSet:
    disease_keywords: frozenset[str]
    function_keywords: frozenset[str]
    require_category: CategoryRule = CategoryRule.THERAPEUTIC_ONLY

    def __post_init__(self):
        if not self.keywords:
            raise KeywordConfigError("keyword rule set is empty")
        for kw in self.keywords:
            if kw != normalize_token(kw) or not kw:
                raise KeywordConfigError(f"keyword {kw!r} is not normalized")

    @classmethod
    def build(cls, disease: Iterable[str] = (), function: Iterable[str] = (),
              require_category: str | CategoryRule = CategoryRule.THERAPEUTIC_ONLY) -> "KeywordRuleSet":
        return cls(frozenset(normalize_token(k) for k in disease),
                   frozenset(normalize_token(k) for k in function),
                   CategoryRule(require_category))

    @property
    def keywords(self) -> frozenset[str]:
        return self.disease_keywords | self.function_keywords

    def with_keyword(self, keyword: str, section: str = "disease") -> "KeywordRuleSet":
        kw = frozenset([normalize_token(keyword)])
        if section == "disease":
            return KeywordRuleSet(self.disease_keywords | kw, self.function_keywords, self.require_category)
        return KeywordRuleSet(self.disease_keywords, self.function_keywords | kw, self.require_category)


@dataclass(frozen=True)
class ProductLabel:
    product_id: str
    is_target: bool
    matched_keywords: frozenset[str]


def parse_keyword_config(text: str, source: str = "<keywords>") -> KeywordRuleSet:
    sections: dict[str, set[str]] = {"disease": set(), "function": set()}
    current = "disease"
    require = CategoryRule.THERAPEUTIC_ONLY
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if sep and key == "require-category":
            try:
                require = CategoryRule(value.strip().lower())
            except ValueError:
                raise KeywordConfigError(f"{source}: unknown category rule {value.strip()!r}",
                                         line=lineno) from None
        elif sep and key == "section":
            current = value.strip().lower()
            if current not in sections:
                raise KeywordConfigError(f"{source}: unknown section {current!r}", line=lineno)
        else:
            sections[current].add(normalize_token(line))
    if not sections["disease"] and not sections["function"]:
        raise KeywordConfigError(f"{source}: no keywords")
    return KeywordRuleSet(frozenset(sections["disease"]), frozenset(sections["function"]), require)


def load_keywords(path: str | Path | None = None) -> KeywordRuleSet:
    """Read a keyword config; ``None`` loads the bundled default list."""
    if path is None:
        text = resources.files("proxyval").joinpath("data/keywords.txt").read_text("utf-8")
        return parse_keyword_config(text, "default keywords")
    return parse_keyword_config(Path(path).read_text("utf-8"), str(path))


def default_rules() -> KeywordRuleSet:
    return load_keywords(None)


def label_product(entry: ProductEntry, rules: KeywordRuleSet) -> ProductLabel:
    name = normalize_token(entry.name)
    matched = frozenset(kw for kw in rules.keywords if kw in name)
    category_ok = (rules.require_category is CategoryRule.ANY
                   or entry.category is Category.THERAPEUTIC)
    return ProductLabel(entry.product_id, category_ok and bool(matched), matched)


def partition_catalog(catalog: Mapping[str, ProductEntry],
                      rules: KeywordRuleSet) -> tuple[frozenset[str], frozenset[str]]:
    """Split a catalog into (target ids, general ids).

    Therapeutic products without a keyword hit land in neither set.  Under
    ``require-category: any`` a general product whose name matches becomes a
    target and leaves the general set.
    """
    targets = set()
    general = set()
    for pid, entry in catalog.items():
        if label_product(entry, rules).is_target:
            targets.add(pid)
        elif entry.category is Category.GENERAL:
            general.add(pid)
    return frozenset(targets), frozenset(general)


def ingredient_exposure(products: Iterable[str], catalog: Mapping[str, ProductEntry]) -> frozenset[str]:
    out: set[str] = set()
    for pid in products:
        try:
            out |= catalog[pid].ingredients
        except KeyError:
            raise UnknownProductId(f"product {pid!r} not in catalog") from None
    return frozenset(out)
