"""App marketplace model: categories, keyword vectors, and app similarity."""

from __future__ import annotations

import math
import string
import unicodedata
from dataclasses import dataclass, field

import yaml


class CatalogError(ValueError):
    """Raised when a catalog document or lookup is invalid."""


_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def normalize_term(term: str) -> str:
    """Lowercase, ASCII-fold, and strip punctuation from a keyword term."""
    folded = unicodedata.normalize("NFKD", term).encode("ascii", "ignore").decode("ascii")
    return folded.lower().translate(_PUNCT_TABLE).strip()


@dataclass(frozen=True)
class AppCategory:
    id: str
    name: str


@dataclass(frozen=True)
class App:
    id: str
    category: str
    keywords: tuple[str, ...]  # normalized multiset, non-empty
    ad_refresh_rate: float     # seconds, > 0

    def keyword_support(self) -> frozenset[str]:
        return frozenset(self.keywords)


@dataclass(frozen=True)
class AppCatalog:
    apps: tuple[App, ...]
    categories: tuple[AppCategory, ...]

    def __post_init__(self):
        if not self.categories:
            raise CatalogError("catalog must define at least one category")
        if not self.apps:
            raise CatalogError("catalog must contain at least one app")
        cat_ids = [c.id for c in self.categories]
        if len(set(cat_ids)) != len(cat_ids):
            raise CatalogError("duplicate category id")
        seen = set()
        for app in self.apps:
            if app.id in seen:
                raise CatalogError(f"duplicate app id: {app.id}")
            seen.add(app.id)
            if app.category not in cat_ids:
                raise CatalogError(f"unknown category: {app.category} (app {app.id})")
            if not app.keywords:
                raise CatalogError(f"app {app.id} has an empty keyword set")
            if app.ad_refresh_rate <= 0:
                raise CatalogError(f"app {app.id} has non-positive refresh rate")

    def __len__(self) -> int:
        return len(self.apps)

    def app(self, app_id: str) -> App:
        for a in self.apps:
            if a.id == app_id:
                return a
        raise CatalogError(f"app not in catalog: {app_id}")

    def has_app(self, app_id: str) -> bool:
        return any(a.id == app_id for a in self.apps)


@dataclass(frozen=True)
class Interest:
    id: str
    keywords: frozenset[str]


@dataclass(frozen=True)
class InterestCategory:
    id: str
    interests: tuple[Interest, ...]


@dataclass(frozen=True)
class InterestTaxonomy:
    categories: tuple[InterestCategory, ...]
    # static app-category -> interest-category mapping table
    category_table: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.categories:
            raise CatalogError("taxonomy must define at least one interest category")
        for cat in self.categories:
            ids = [g.id for g in cat.interests]
            if len(set(ids)) != len(ids):
                raise CatalogError(f"duplicate interest id in category {cat.id}")

    def category_ids(self) -> list[str]:
        return [c.id for c in self.categories]


# A term-weight vector is a plain dict: term -> non-negative weight, absent = 0.
TermWeightVector = dict[str, float]


def load_catalog(source, include_category_term: bool = True) -> AppCatalog:
    """Load and validate a catalog from a YAML document (path, file, or string).

    Keywords are normalized; the app's category id is included as one keyword
    term unless ``include_category_term`` is False.
    """
    if hasattr(source, "read"):
        doc = yaml.safe_load(source)
    else:
        text = str(source)
        if "\n" not in text and not text.lstrip().startswith(("{", "[")):
            with open(text, "r", encoding="utf-8") as fh:
                doc = yaml.safe_load(fh)
        else:
            doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise CatalogError("catalog document must be a mapping")
    try:
        categories = tuple(
            AppCategory(id=str(c["id"]), name=str(c.get("name", c["id"])))
            for c in doc.get("categories", [])
        )
        apps = []
        for a in doc.get("apps", []):
            keywords = [normalize_term(k) for k in a.get("keywords", [])]
            keywords = [k for k in keywords if k]
            if include_category_term:
                keywords.append(normalize_term(str(a["category"])))
            apps.append(
                App(
                    id=str(a["id"]),
                    category=str(a["category"]),
                    keywords=tuple(keywords),
                    ad_refresh_rate=float(a["refresh_rate_s"]),
                )
            )
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"malformed catalog document: {exc}") from exc
    return AppCatalog(apps=tuple(apps), categories=categories)


def default_taxonomy(catalog: AppCatalog) -> InterestTaxonomy:
    """Derive a one-interest-per-app-category taxonomy from a catalog.

    Interest category ids mirror app category ids; each carries a single
    interest whose keyword set is the union of its apps' keywords.
    """
    categories = []
    table = {}
    for cat in catalog.categories:
        terms: set[str] = set()
        for app in catalog.apps:
            if app.category == cat.id:
                terms |= app.keyword_support()
        categories.append(
            InterestCategory(
                id=cat.id,
                interests=(Interest(id=f"{cat.id}.general", keywords=frozenset(terms)),),
            )
        )
        table[cat.id] = cat.id
    return InterestTaxonomy(categories=tuple(categories), category_table=table)


def keyword_vector(app: App, catalog: AppCatalog) -> TermWeightVector:
    """tf-idf weights for an app's keyword multiset.

    tf = count / multiset size; idf = ln(1 + N/df), smoothed so a term present
    in every app (or a single-app catalog) still gets positive weight.
    """
    if not catalog.has_app(app.id):
        raise CatalogError(f"app not in catalog: {app.id}")
    n_apps = len(catalog)
    size = len(app.keywords)
    counts: dict[str, int] = {}
    for term in app.keywords:
        counts[term] = counts.get(term, 0) + 1
    vec: TermWeightVector = {}
    for term, count in counts.items():
        df = sum(1 for other in catalog.apps if term in other.keyword_support())
        vec[term] = (count / size) * math.log(1.0 + n_apps / df)
    return vec


def _cosine(u: TermWeightVector, v: TermWeightVector) -> float:
    dot = sum(w * v.get(t, 0.0) for t, w in u.items())
    nu = math.sqrt(sum(w * w for w in u.values()))
    nv = math.sqrt(sum(w * w for w in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return min(1.0, dot / (nu * nv))


def similarity(a: App, b: App, catalog: AppCatalog, metric: str = "cosine") -> float:
    """Similarity in [0, 1] between two catalog apps.

    ``metric`` selects the implementation: "cosine" (tf-idf, default) or
    "jaccard" over keyword supports.
    """
    if not catalog.has_app(a.id) or not catalog.has_app(b.id):
        raise CatalogError("both apps must belong to the catalog")
    if metric == "cosine":
        return _cosine(keyword_vector(a, catalog), keyword_vector(b, catalog))
    if metric == "jaccard":
        sa, sb = a.keyword_support(), b.keyword_support()
        union = sa | sb
        if not union:
            return 0.0
        return len(sa & sb) / len(union)
    raise ValueError(f"unknown similarity metric: {metric}")
