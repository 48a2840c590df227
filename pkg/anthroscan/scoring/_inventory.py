from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from anthroscan.errors import InventoryError, LastPronoun, UnknownPronoun

from ._model import PronounInventory

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def load_inventory(path: Path | str | None = None) -> PronounInventory:
    """
    Read a pronoun inventory from a TOML file with `human` and `non_human`
    arrays. With no path, the bundled inventory is returned.

    >>> inv = load_inventory()
    >>> len(inv.human), len(inv.non_human)
    (7, 4)
    """
    if path is None:
        text = resources.files("anthroscan.data").joinpath("pronouns.toml").read_text()
        source = "<bundled pronouns.toml>"
    else:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise InventoryError(f"cannot read inventory {path}: {e}") from e
        source = str(path)

    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise InventoryError(f"{source}: {e}") from e

    unknown = set(doc) - {"human", "non_human"}
    if unknown:
        raise InventoryError(f"{source}: unexpected keys {', '.join(sorted(unknown))}")
    for key in ("human", "non_human"):
        if not isinstance(doc.get(key), list):
            raise InventoryError(f"{source}: {key!r} must be a list of strings")
    return PronounInventory(human=tuple(doc["human"]), non_human=tuple(doc["non_human"]))


def swap_inventory(inventory: PronounInventory) -> PronounInventory:
    """
    >>> swap_inventory(PronounInventory(('he',), ('it',)))
    PronounInventory(human=('it',), non_human=('he',))
    """
    return PronounInventory(human=inventory.non_human, non_human=inventory.human)


def inventory_without(inventory: PronounInventory, pronoun: str) -> PronounInventory:
    """
    The inventory with one pronoun removed.

    >>> from anthroscan.scoring import DEFAULT_INVENTORY
    >>> inventory_without(DEFAULT_INVENTORY, 'him').human
    ('he', 'she', 'her', 'He', 'She', 'Her')
    >>> inventory_without(PronounInventory(('he',), ('it',)), 'he')
    Traceback (most recent call last):
    ...
    anthroscan.errors.LastPronoun: removing 'he' would leave no human pronouns
    """
    if pronoun not in inventory.pronouns:
        raise UnknownPronoun(f"{pronoun!r} is not in the inventory")

    human = tuple(w for w in inventory.human if w != pronoun)
    non_human = tuple(w for w in inventory.non_human if w != pronoun)
    for name, words in (("human", human), ("non-human", non_human)):
        if not words:
            raise LastPronoun(f"removing {pronoun!r} would leave no {name} pronouns")
    return PronounInventory(human=human, non_human=non_human)
