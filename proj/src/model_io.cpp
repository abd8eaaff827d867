#include "scenelab/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scenelab/errors.hpp"

namespace scenelab {

namespace {

constexpr const char* kMagic = "scenelab model";

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    return hash;
}

// Lossless hexadecimal float literal; strtod parses it back exactly.
std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
        throw CorruptModel("bad float literal: '" + tok + "'");
    if (!std::isfinite(v))
        throw CorruptModel("non-finite value in model file: '" + tok + "'");
    return v;
}

long parse_int(const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + tok.size() || tok.empty())
        throw CorruptModel("bad integer literal: '" + tok + "'");
    return v;
}

class LineReader {
public:
    explicit LineReader(const std::string& body) : in_(body) {}

    bool next(std::string* line) {
        return bool(std::getline(in_, *line));
    }

private:
    std::istringstream in_;
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok)
        fields.push_back(tok);
    return fields;
}

}  // namespace

void save_model(const ModelFile& m, std::ostream& out) {
    std::string buf;
    buf.reserve(1 << 16);
    const auto line = [&buf](const std::string& s) {
        buf += s;
        buf += '\n';
    };

    line(kMagic);
    line("[header]");
    line("format_version " + std::to_string(m.format_version));
    line("vocab_size " + std::to_string(m.vocab.size()));
    line("descriptor_dim " + std::to_string(m.vocab.dim()));
    line("fuzziness " + hex_double(m.sig_cfg.fuzziness));
    line(std::string("normalize_bow ") + (m.sig_cfg.normalize_bow ? "1" : "0"));
    line(std::string("bow_only ") + (m.bow_only ? "1" : "0"));
    line("feature_dim " + std::to_string(m.nb.feature_dim));
    line("variance_floor " + hex_double(m.nb.variance_floor));

    line("[vocab]");
    for (int i = 0; i < m.vocab.size(); ++i) {
        std::string s = "word " + std::to_string(i);
        for (float v : m.vocab.words[i]) {
            s += ' ';
            s += hex_double(double(v));
        }
        line(s);
    }

    line("[nb]");
    for (int c = 0; c < kNumClasses; ++c)
        line("prior " + std::to_string(c) + " " + hex_double(m.nb.priors[c]));
    for (int c = 0; c < kNumClasses; ++c) {
        std::string s = "mean " + std::to_string(c);
        for (double v : m.nb.feat_mean[c]) {
            s += ' ';
            s += hex_double(v);
        }
        line(s);
        s = "var " + std::to_string(c);
        for (double v : m.nb.feat_var[c]) {
            s += ' ';
            s += hex_double(v);
        }
        line(s);
    }

    line("[provenance]");
    for (const std::string& note : m.provenance)
        line(note.empty() ? "note" : "note " + note);

    char checksum[32];
    std::snprintf(checksum, sizeof checksum, "checksum %016llx",
                  static_cast<unsigned long long>(fnv1a64(buf)));
    buf += checksum;
    buf += '\n';
    out << buf;
}

void save_model(const ModelFile& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open model file for writing: " + path.string());
    save_model(m, out);
    out.flush();
    if (!out)
        throw IoError("failed writing model file: " + path.string());
}

ModelFile load_model(std::istream& in) {
    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string content = raw.str();

    if (content.rfind(kMagic, 0) != 0)
        throw CorruptModel("not a scenelab model file");

    // Reject unknown versions before anything else; future formats may not
    // even share this checksum scheme.
    {
        LineReader scan(content);
        std::string line;
        while (scan.next(&line)) {
            const std::vector<std::string> f = split_fields(line);
            if (f.size() == 2 && f[0] == "format_version") {
                if (parse_int(f[1]) != kModelFormatVersion)
                    throw VersionMismatch("unsupported model format version " + f[1]);
                break;
            }
        }
    }

    // The checksum line covers every byte before it.
    const std::size_t tail = content.rfind("checksum ");
    if (tail == std::string::npos || (tail != 0 && content[tail - 1] != '\n'))
        throw CorruptModel("missing checksum line");
    const std::string body = content.substr(0, tail);
    std::string checksum_line = content.substr(tail);
    if (!checksum_line.empty() && checksum_line.back() == '\n')
        checksum_line.pop_back();
    const std::vector<std::string> ck = split_fields(checksum_line);
    if (ck.size() != 2)
        throw CorruptModel("malformed checksum line");
    char expected[17];
    std::snprintf(expected, sizeof expected, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    if (ck[1] != expected)
        throw CorruptModel("checksum mismatch: file is corrupt");

    LineReader reader(body);
    std::string line;
    if (!reader.next(&line) || line != kMagic)
        throw CorruptModel("not a scenelab model file");

    ModelFile m;
    m.format_version = -1;
    int vocab_size = -1;
    int descriptor_dim = -1;
    std::string section;
    int words_read = 0;
    bool saw_version = false;

    while (reader.next(&line)) {
        if (line.empty())
            continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        const std::vector<std::string> f = split_fields(line);
        if (section == "[header]") {
            if (f.size() != 2)
                throw CorruptModel("malformed header line: '" + line + "'");
            if (f[0] == "format_version") {
                m.format_version = int(parse_int(f[1]));
                saw_version = true;
                if (m.format_version != kModelFormatVersion)
                    throw VersionMismatch("unsupported model format version " + f[1]);
            } else if (f[0] == "vocab_size") {
                vocab_size = int(parse_int(f[1]));
            } else if (f[0] == "descriptor_dim") {
                descriptor_dim = int(parse_int(f[1]));
            } else if (f[0] == "fuzziness") {
                m.sig_cfg.fuzziness = parse_double(f[1]);
            } else if (f[0] == "normalize_bow") {
                m.sig_cfg.normalize_bow = parse_int(f[1]) != 0;
            } else if (f[0] == "bow_only") {
                m.bow_only = parse_int(f[1]) != 0;
            } else if (f[0] == "feature_dim") {
                m.nb.feature_dim = int(parse_int(f[1]));
            } else if (f[0] == "variance_floor") {
                m.nb.variance_floor = parse_double(f[1]);
            } else {
                throw CorruptModel("unknown header key: '" + f[0] + "'");
            }
        } else if (section == "[vocab]") {
            if (f.size() != std::size_t(descriptor_dim) + 2 || f[0] != "word" ||
                parse_int(f[1]) != words_read)
                throw CorruptModel("malformed vocab line: '" + line.substr(0, 40) + "...'");
            std::vector<float> word(descriptor_dim);
            for (int j = 0; j < descriptor_dim; ++j)
                word[j] = float(parse_double(f[j + 2]));
            m.vocab.words.push_back(std::move(word));
            ++words_read;
        } else if (section == "[nb]") {
            if (f[0] == "prior") {
                if (f.size() != 3)
                    throw CorruptModel("malformed prior line");
                const long c = parse_int(f[1]);
                if (c < 0 || c >= kNumClasses)
                    throw CorruptModel("prior class index out of range");
                m.nb.priors[c] = parse_double(f[2]);
            } else if (f[0] == "mean" || f[0] == "var") {
                if (f.size() != std::size_t(m.nb.feature_dim) + 2)
                    throw DimensionInconsistency("wrong value count on '" + f[0] + "' line");
                const long c = parse_int(f[1]);
                if (c < 0 || c >= kNumClasses)
                    throw CorruptModel(f[0] + " class index out of range");
                std::vector<double> values(m.nb.feature_dim);
                for (int j = 0; j < m.nb.feature_dim; ++j)
                    values[j] = parse_double(f[j + 2]);
                (f[0] == "mean" ? m.nb.feat_mean : m.nb.feat_var)[c] = std::move(values);
            } else {
                throw CorruptModel("unknown nb key: '" + f[0] + "'");
            }
        } else if (section == "[provenance]") {
            if (f.empty() || f[0] != "note")
                throw CorruptModel("malformed provenance line");
            m.provenance.push_back(line.size() > 5 ? line.substr(5) : std::string());
        } else {
            throw CorruptModel("content outside any section");
        }
    }

    if (!saw_version)
        throw CorruptModel("missing format_version");
    if (vocab_size < 1 || descriptor_dim < 1 || int(m.vocab.words.size()) != vocab_size)
        throw DimensionInconsistency("vocabulary size mismatch");
    const int expected_dim = vocab_size + (m.bow_only ? 0 : 6);
    if (m.nb.feature_dim != expected_dim)
        throw DimensionInconsistency("feature_dim " + std::to_string(m.nb.feature_dim) +
                                     " inconsistent with vocab size " + std::to_string(vocab_size));
    for (int c = 0; c < kNumClasses; ++c) {
        if (int(m.nb.feat_mean[c].size()) != m.nb.feature_dim ||
            int(m.nb.feat_var[c].size()) != m.nb.feature_dim)
            throw DimensionInconsistency("missing mean/var rows for class " + std::to_string(c));
    }
    m.sig_cfg.vocab_size = vocab_size;
    return m;
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open model file: " + path.string());
    return load_model(in);
}

}  // namespace scenelab
