"""Shared fixtures: reference GEDCOM files and small parsed trees."""

import pytest

from genqa import build_family_tree_graph, parse

# Replica of the classic two-record lineage-linked sample: two spouses
# with birth/death/burial/ordinance events, family links that point at
# families not present in the file, and a free-text note.
FIG3_GEDCOM = """0 HEAD
1 SOUR SomeSite
2 NAME Some Site
2 VERS 3.0
1 DATE 30 JUN 1985
2 TIME 19:38:50
1 FILE example.ged
1 GEDC
2 VERS 5.5
2 FORM LINEAGE-LINKED
1 CHAR ANSEL
0 @I137@ INDI
1 NAME Emily Williams
1 SEX F
1 BIRT
2 DATE 28 MAY 1816
2 PLAC New York, USA
1 DEAT
2 DATE 7 FEB 1899
2 PLAC Uinta, Wyoming, USA
1 BURI
2 DATE 10 FEB 1899
2 PLAC Uinta, Wyoming, USA
1 BAPL
2 DATE 1 JUN 1832
1 ENDL
2 DATE 30 DEC 1845
2 TEMP NAUVO
1 FAMS @F73@
1 FAMC @F79@
1 SLGC
2 DATE 18 NOV 1894
2 TEMP SLAKE
1 CHAN
2 DATE 14 MAY 1999
3 TIME 09:57:42
0 @I162@ INDI
1 NAME John Williams
1 SEX M
1 BIRT
2 DATE 16 MAY 1826
2 PLAC Indiana, USA
1 DEAT
2 DATE 25 SEP 1912
2 PLAC Uinta, Wyoming, USA
1 BURI
2 DATE 28 SEP 1912
2 PLAC Uinta, Wyoming
1 BAPL
2 DATE 9 AUG 1877
1 ENDL
2 DATE 30 DEC 1845
2 TEMP NAUVO
1 FAMS @F73@
1 FAMC @F1598@
1 NOTE Baptism date appears to be 3 days later by the records of the city...
0 TRLR
"""


# Three-generation reference tree used for traversal traces.  The focus
# person @SP@ has parents (@P1@, @P2@) with their own parent families,
# siblings (@P7@, @P8@), a spouse (@P10@), children (@P12@, @P13@)
# married to @P11@/@P14@, and grandchildren (@P15@-@P17@).
def _indi(xref: str, name: str, sex: str, famc=None, fams=None) -> str:
    lines = [f"0 {xref} INDI", f"1 NAME {name}", f"1 SEX {sex}"]
    for f in famc or []:
        lines.append(f"1 FAMC {f}")
    for f in fams or []:
        lines.append(f"1 FAMS {f}")
    return "\n".join(lines)


def _fam(xref: str, husb=None, wife=None, children=()) -> str:
    lines = [f"0 {xref} FAM"]
    if husb:
        lines.append(f"1 HUSB {husb}")
    if wife:
        lines.append(f"1 WIFE {wife}")
    for c in children:
        lines.append(f"1 CHIL {c}")
    return "\n".join(lines)


FIG2_GEDCOM = "\n".join([
    "0 HEAD",
    "1 GEDC",
    "2 VERS 5.5.1",
    "2 FORM LINEAGE-LINKED",
    "1 CHAR UTF-8",
    _indi("@SP@", "Sara /Levi/", "F", famc=["@F1@"], fams=["@F4@"]),
    _indi("@P1@", "Abe /Levi/", "M", famc=["@F2@"], fams=["@F1@"]),
    _indi("@P2@", "Bella /Levi/", "F", famc=["@F3@"], fams=["@F1@"]),
    _indi("@P3@", "Carl /Stein/", "M", fams=["@F2@"]),
    _indi("@P4@", "Dora /Stein/", "F", fams=["@F2@"]),
    _indi("@P5@", "Eli /Roth/", "M", fams=["@F3@"]),
    _indi("@P6@", "Fay /Roth/", "F", fams=["@F3@"]),
    _indi("@P7@", "Gil /Levi/", "M", famc=["@F1@"]),
    _indi("@P8@", "Hana /Levi/", "F", famc=["@F1@"]),
    _indi("@P10@", "Ido /Katz/", "M", fams=["@F4@"]),
    _indi("@P11@", "Jill /Mor/", "F", fams=["@F5@"]),
    _indi("@P12@", "Ken /Katz/", "M", famc=["@F4@"], fams=["@F5@"]),
    _indi("@P13@", "Lia /Katz/", "F", famc=["@F4@"], fams=["@F6@"]),
    _indi("@P14@", "Max /Gold/", "M", fams=["@F6@"]),
    _indi("@P15@", "Nina /Katz/", "F", famc=["@F5@"]),
    _indi("@P16@", "Omer /Katz/", "M", famc=["@F5@"]),
    _indi("@P17@", "Pia /Gold/", "F", famc=["@F6@"]),
    _fam("@F1@", husb="@P1@", wife="@P2@", children=["@SP@", "@P7@", "@P8@"]),
    _fam("@F2@", husb="@P3@", wife="@P4@", children=["@P1@"]),
    _fam("@F3@", husb="@P5@", wife="@P6@", children=["@P2@"]),
    _fam("@F4@", husb="@P10@", wife="@SP@", children=["@P12@", "@P13@"]),
    _fam("@F5@", husb="@P12@", wife="@P11@", children=["@P15@", "@P16@"]),
    _fam("@F6@", husb="@P14@", wife="@P13@", children=["@P17@"]),
    "0 TRLR",
]) + "\n"


DEMO_GEDCOM = """0 HEAD
1 GEDC
2 VERS 5.5.1
2 FORM LINEAGE-LINKED
1 CHAR UTF-8
0 @I1@ INDI
1 NAME Mia /Brown/
1 SEX F
1 BIRT
2 DATE 12 MAR 1935
2 PLAC Poland
1 DEAT
2 DATE 1995
2 PLAC Poland
1 FAMS @F1@
0 @I2@ INDI
1 NAME Tom /Brown/
1 SEX M
1 BIRT
2 DATE ABT 1930
2 PLAC Warsaw, Poland
1 OCCU Carpenter
1 FAMS @F1@
0 @I3@ INDI
1 NAME Emily /Brown/
1 SEX F
1 BIRT
2 DATE 1961
2 PLAC Poland
1 NOTE She worked as a nurse in Tel Aviv.
1 FAMC @F1@
0 @F1@ FAM
1 HUSB @I2@
1 WIFE @I1@
1 CHIL @I3@
1 MARR
2 DATE 1958
2 PLAC Krakow
0 TRLR
"""


@pytest.fixture(scope="session")
def fig3_text() -> str:
    return FIG3_GEDCOM


@pytest.fixture(scope="session")
def fig3_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("ged") / "fig3.ged"
    path.write_text(FIG3_GEDCOM, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def fig2_doc():
    return parse(FIG2_GEDCOM, source_path="fig2")


@pytest.fixture(scope="session")
def fig2_graph(fig2_doc):
    return build_family_tree_graph(fig2_doc)


@pytest.fixture(scope="session")
def demo_doc():
    return parse(DEMO_GEDCOM, source_path="demo")


@pytest.fixture(scope="session")
def demo_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("ged") / "demo.ged"
    path.write_text(DEMO_GEDCOM, encoding="utf-8")
    return path
