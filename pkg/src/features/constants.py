# Gold keyphrases are scored in each of these splits
PRESENT_SPLIT = "present"
ABSENT_SPLIT = "absent"
SEMI_PRESENT_SPLIT = "semi_present"
ABSENT_WITHOUT_SEMI_SPLIT = "absent_without_semi"
SPLITS = (PRESENT_SPLIT, ABSENT_SPLIT, SEMI_PRESENT_SPLIT, ABSENT_WITHOUT_SEMI_SPLIT)

# F1@5 pads (with wrong answers) or truncates the predictions to this many
TOP_K = 5

# Sentence-count quantile buckets of the analysis
NUM_BUCKETS = 5

# Gate patterns of the attention dump: natural gates, every sentence forced significant, every sentence forced irrelevant
NATURAL_CONDITION = "natural"
SIGNIFICANT_CONDITION = "significant"
IRRELEVANT_CONDITION = "irrelevant"

REPORT_FORMAT_VERSION = 1
ANALYSIS_FORMAT_VERSION = 1
ATTENTION_DUMP_FORMAT_VERSION = 1
