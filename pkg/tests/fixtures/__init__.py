"""MAF documents used by the tests."""

from pathlib import Path

FIXTURES_DIR = Path(__file__).parent

GRIGORCHUK_FILE = FIXTURES_DIR / "grigorchuk.maf"
GUPTA_SIDKI_FILE = FIXTURES_DIR / "gupta_sidki.maf"
IDENTITY_FILE = FIXTURES_DIR / "identity.maf"
REDUNDANT_IDENTITY_FILE = FIXTURES_DIR / "redundant_identity.maf"
NOT_INVERTIBLE_FILE = FIXTURES_DIR / "not_invertible.maf"
DANGLING_FILE = FIXTURES_DIR / "dangling.maf"
BAD_HEADER_FILE = FIXTURES_DIR / "bad_header.maf"
BAD_FIELD_FILE = FIXTURES_DIR / "bad_field.maf"
