// Source: real-world cockroachdb#25456, minimal reconstruction
// Expected: Deadlock
//
// The consistency checker reports its result on an unbuffered channel, but
// the caller has already given up on the first failure and stopped reading.
package main

import "fmt"

type CheckResult struct {
	ok bool
}

func checkRange(id int, results chan CheckResult) {
	results <- CheckResult{ok: id != 2}
}

func main() {
	results := make(chan CheckResult)
	go checkRange(1, results)
	go checkRange(2, results)
	first := <-results
	fmt.Println("first result", first.ok)
}
