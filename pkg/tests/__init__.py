# Tests for uniqset
