// Pattern: P7 rec-main
// Expected: NoDeadlock
//
// Each tick starts its successor; main stops listening after three ticks.
package main

import (
	"fmt"
	"time"
)

func tick(ch chan int) {
	ch <- 1
	time.Sleep(10 * time.Millisecond)
	go tick(ch)
}

func main() {
	ch := make(chan int)
	go tick(ch)
	for i := 0; i < 3; i++ {
		fmt.Println(<-ch)
	}
}
