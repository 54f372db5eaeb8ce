"""Template-generated labeled tweets used as the bundled demo/test corpus.

Sentences follow the short noun + opinion shape of real e-commerce
complaints and praise. Classes are separable by their opinion words by
construction; nouns, brands and decorations are shared by both classes.
"""

import json
import random
from importlib import resources

from .corpus import Corpus, Label, LabeledDocument

BRANDS = ("Bukalapak", "Tokopedia", "Elevenia")
NOUNS = (
    "layanan", "promo pulsa", "penjual", "tombol bantuan", "iklan", "cara bayar",
    "pengiriman", "barang", "aplikasi", "harga", "admin", "kurir", "voucher", "diskon",
)
OPINIONS = {
    Label.POSITIVE: (
        "baik", "mantap", "lucu", "cepat", "murah", "ramah", "bagus", "keren",
        "puas", "aman", "memuaskan", "rekomended", "oke", "top",
    ),
    Label.NEGATIVE: (
        "ribet", "rugi", "lambat", "mahal", "kecewa", "parah", "gagal", "susah",
        "lemot", "tidak ada tanggung jawab", "tidak jelas", "jelek", "telat", "bohong",
    ),
}
TEMPLATES = (
    "{noun} {opinion}",
    "{noun} {brand} {opinion}",
    "@{handle} {noun} {opinion}",
    "{noun} {opinion} banget #{brand}",
    "{opinion}!! {noun} di {brand} https://t.co/{code}",
    "{Noun} {OPINION} sekali",
)

BUNDLED = "data/synthetic_corpus.jsonl"


def generate(n_per_class=100, seed=2016):
    """Return a :class:`Corpus` of ``2 * n_per_class`` unique labeled texts."""
    rng = random.Random(seed)
    docs = []
    seen = set()
    for label in (Label.POSITIVE, Label.NEGATIVE):
        made = 0
        while made < n_per_class:
            brand = BRANDS[len(docs) % len(BRANDS)]
            noun = rng.choice(NOUNS)
            opinion = rng.choice(OPINIONS[label])
            text = rng.choice(TEMPLATES).format(
                noun=noun, Noun=noun.capitalize(), opinion=opinion, OPINION=opinion.upper(),
                brand=brand, handle=brand.lower() + "care", code=f"{rng.randrange(16**6):06x}",
            )
            key = " ".join(text.lower().split())
            if key in seen:
                continue
            seen.add(key)
            made += 1
            docs.append(LabeledDocument(f"{label.value[:3]}-{made:03d}", text, label, brand))
    return Corpus(tuple(docs), f"synthetic n_per_class={n_per_class} seed={seed}")


def to_jsonl(corpus):
    return "".join(json.dumps(doc.to_record(), ensure_ascii=False) + "\n" for doc in corpus)


def bundled_path():
    return resources.files("sentimin").joinpath(BUNDLED)
