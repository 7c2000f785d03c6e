from qode import preferences


def test_defaults_when_missing(tmp_path):
	prefs = preferences.load(str(tmp_path / "absent.cfg"))
	assert prefs.epsilon == 1e-10
	assert prefs.target == "history"
	assert prefs.jobs == 1


def test_save_and_reload(tmp_path):
	path = str(tmp_path / "sub" / "preferences.cfg")
	prefs = preferences.qode_preferences()
	prefs.epsilon = 1e-6
	prefs.scheme = "additive"
	prefs.exact_truncation = True
	prefs.save_to_file(path)
	assert preferences.load(path).as_dict() == prefs.as_dict()


def test_malformed_file_falls_back(tmp_path):
	path = tmp_path / "preferences.cfg"
	path.write_text("[cfg]\nepsilon = small\n", encoding="utf-8")
	assert preferences.load(str(path)).as_dict() == preferences.qode_preferences().as_dict()
	path.write_text("[cfg]\nepsilon = 1e-4\nomega = 1\nancillas = 0\ntarget = past\nscheme = auto\n"
		"amplification = repeat\njobs = 1\ngrid_points = 64\nexact_truncation = False\n", encoding="utf-8")
	assert preferences.load(str(path)).target == "history"
