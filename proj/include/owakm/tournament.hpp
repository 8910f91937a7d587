#pragma once

#include <string>
#include <vector>

#include "owakm/errors.hpp"

namespace owakm::rounding {

// Fixed binary tree with one variable index per leaf. The pairing order of
// the rounding process is read off this tree and never depends on outcomes.
class TournamentTree {
public:
    struct Node {
        int left = -1, right = -1; // children, or -1
        int leaf = -1;             // variable index when this is a leaf
    };

    int add_leaf(int var) {
        nodes_.push_back(Node{-1, -1, var});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int add_internal(int left, int right) {
        if (left < 0 || right < 0 || left >= static_cast<int>(nodes_.size()) || right >= static_cast<int>(nodes_.size()))
            throw InputError("tournament tree: child index out of range");
        nodes_.push_back(Node{left, right, -1});
        return static_cast<int>(nodes_.size()) - 1;
    }

    void set_root(int r) { root_ = r; }
    int root() const { return root_; }
    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int leaf_count() const { return leaves_; }

    // Minimum-depth tree over variables 0..m-1 in index order.
    static TournamentTree balanced(int m) {
        TournamentTree t;
        t.root_ = t.build_balanced(0, m);
        t.finalize(m);
        return t;
    }

    // Left-deep comb (((0,1),2),3)...; matches rounding along a predefined
    // linear order of the variables.
    static TournamentTree linear(int m) {
        if (m < 1) throw InputError("tournament tree: need at least one leaf");
        TournamentTree t;
        int cur = t.add_leaf(0);
        for (int i = 1; i < m; ++i) cur = t.add_internal(cur, t.add_leaf(i));
        t.root_ = cur;
        t.finalize(m);
        return t;
    }

    void finalize(int m) {
        if (root_ < 0) throw InputError("tournament tree: no root");
        std::vector<int> seen(static_cast<std::size_t>(m), 0);
        leaves_ = 0;
        check(root_, seen, m);
        for (int i = 0; i < m; ++i)
            if (seen[static_cast<std::size_t>(i)] != 1)
                throw InputError("tournament tree: variable " + std::to_string(i) + " must appear in exactly one leaf");
        if (leaves_ != m) throw InputError("tournament tree: leaf count mismatch");
    }

private:
    int build_balanced(int lo, int hi) {
        if (hi - lo < 1) throw InputError("tournament tree: need at least one leaf");
        if (hi - lo == 1) return add_leaf(lo);
        const int mid = lo + (hi - lo + 1) / 2;
        const int l   = build_balanced(lo, mid);
        const int r   = build_balanced(mid, hi);
        return add_internal(l, r);
    }

    void check(int id, std::vector<int>& seen, int m) {
        const Node& nd = node(id);
        if (nd.leaf >= 0) {
            if (nd.left >= 0 || nd.right >= 0) throw InputError("tournament tree: leaf with children");
            if (nd.leaf >= m) throw InputError("tournament tree: leaf variable out of range");
            ++seen[static_cast<std::size_t>(nd.leaf)];
            ++leaves_;
            return;
        }
        if (nd.left < 0 || nd.right < 0) throw InputError("tournament tree: internal node needs two children");
        check(nd.left, seen, m);
        check(nd.right, seen, m);
    }

    std::vector<Node> nodes_;
    int root_   = -1;
    int leaves_ = 0;
};

} // namespace owakm::rounding
