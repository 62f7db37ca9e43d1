// Walks one message through every stage of the pipeline and prints what each
// stage produced, so the data flow can be read top to bottom.

#include <cstdio>
#include <string>

#include "ncrna/bytes.hpp"
#include "ncrna/codon.hpp"
#include "ncrna/envelope.hpp"
#include "ncrna/fold.hpp"
#include "ncrna/keyforge.hpp"
#include "ncrna/pbox.hpp"

int main() {
    using namespace ncrna;

    const std::string message = "transcription is not translation";
    const Bytes plaintext(message.begin(), message.end());
    const Bytes secret = {'p', 'a', 's', 's', 'p', 'h', 'r', 'a', 's', 'e'};
    const Bytes seed = from_hex("8899aabbccddeeff0011223344556677");

    std::printf("message   %s\n", message.c_str());

    CodonSBox box = build_sbox(seed);
    RnaSequence rna = encode(plaintext, box);
    std::string letters = rna.to_string();
    std::printf("encoded   %zu bases, first 48: %.48s\n", rna.size(), letters.c_str());

    SecondaryStructure st = fold(rna, EnergyModel::standard());
    std::size_t stems = 2 * st.pairs.size();
    std::printf("folded    mfe %d, %zu of %zu bases in stems\n", st.mfe, stems, rna.size());
    std::printf("structure %.48s\n", st.dot_bracket.c_str());

    StructuralLabels labels = labels_of(st);
    Permutation perm = permutation_from_labels(labels);
    std::printf("permuted  %zu stem positions moved ahead of %zu loop positions\n", stems,
                rna.size() - stems);
    std::printf("          first loop base now sits at index %zu, came from %u\n", stems,
                perm.map[stems]);

    MasterSequence master = extract_master(secret);
    std::printf("keyed     fingerprint %s\n", to_hex(master.source_fingerprint).c_str());

    Envelope env = encrypt(plaintext, secret, seed);
    Bytes wire = serialize(env);
    std::printf("sealed    %zu byte envelope, salt %s\n", wire.size(),
                to_hex(env.salt.data(), env.salt.size()).c_str());

    Bytes back = decrypt(env, secret, seed);
    std::printf("opened    %s\n",
                back == plaintext ? "plaintext recovered bit for bit" : "MISMATCH");

    // flip one ciphertext byte to show the tag refusing to open it
    Envelope bent = env;
    bent.ciphertext[bent.ciphertext.size() / 2] ^= 0x01;
    try {
        decrypt(bent, secret, seed);
        std::printf("tampered  NOT DETECTED\n");
        return 1;
    } catch (const IntegrityFailure&) {
        std::printf("tampered  rejected as expected\n");
    }
    return back == plaintext ? 0 : 1;
}
