"""From raw clickstream text to a user x page access matrix and back to CSV.

Two log layouts are understood.  ``per-user-sequence`` has one line per
user listing page ids in visit order (user names are generated as u1, u2,
...).  ``user-prefixed`` has one ``user<TAB>page`` visit per line.
"""

from webbicluster import build_matrix, parse_clickstream, read_matrix_csv, write_matrix_csv

sequences = """\
home news sport sport
home weather
news sport sport sport
home news weather weather
"""

log = parse_clickstream(sequences, "per-user-sequence")
for session in log:
    print(session.user_id, "->", " ".join(session.page_ids))

matrix = build_matrix(log)
print(f"\n{matrix.n} users x {matrix.m} pages, {matrix.total_hits:g} hits")
csv_text = write_matrix_csv(matrix)
print(csv_text)

# The CSV is the interchange format for the command-line tools and
# round-trips exactly.
assert read_matrix_csv(csv_text) == matrix

# The tab-separated variant groups visits by user in first-seen order.
tabbed = "alice\thome\nbob\tnews\nalice\tnews\nbob\tnews\ncarol\thome\n"
print(write_matrix_csv(build_matrix(parse_clickstream(tabbed, "user-prefixed"))))
