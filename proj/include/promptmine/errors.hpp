#pragma once

#include <stdexcept>
#include <string>

namespace promptmine {

/// Base of every error raised by the library. `kind()` is a stable token used
/// in machine-readable error records.
class Error : public std::runtime_error {
public:
	explicit Error(const std::string &what) : std::runtime_error(what) {}
	virtual const char *kind() const noexcept { return "error"; }
};

#define PROMPTMINE_ERROR(Name, token)                                                                                  \
	class Name : public Error {                                                                                        \
	public:                                                                                                            \
		using Error::Error;                                                                                            \
		const char *kind() const noexcept override { return token; }                                                   \
	};

PROMPTMINE_ERROR(SchemaError, "schema_error")
PROMPTMINE_ERROR(IoError, "io_error")
PROMPTMINE_ERROR(ConfigError, "config_error")
PROMPTMINE_ERROR(TemplateSyntaxError, "template_syntax_error")
PROMPTMINE_ERROR(RenderError, "render_error")
PROMPTMINE_ERROR(EmptyTextError, "empty_text_error")
PROMPTMINE_ERROR(DegenerateCorpusError, "degenerate_corpus_error")
PROMPTMINE_ERROR(GateRejectedError, "gate_rejected_error")
PROMPTMINE_ERROR(ShapeError, "shape_error")
PROMPTMINE_ERROR(NoExpressionsFound, "no_expressions_found")
PROMPTMINE_ERROR(AlignmentError, "alignment_error")

#undef PROMPTMINE_ERROR

/// Raised by generation backends. Carries how many attempts were made.
class BackendError : public Error {
public:
	BackendError(const std::string &what, int attempts) : Error(what), attempts_(attempts) {}
	const char *kind() const noexcept override { return "backend_error"; }
	int attempts() const noexcept { return attempts_; }

private:
	int attempts_;
};

} // namespace promptmine
