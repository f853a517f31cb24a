// Pattern: P6 main-exit
// Expected: NoDeadlock
//
// main returns while workers are still running; the runtime stops them.
package main

import (
	"fmt"
	"time"
)

func worker(id int, started chan int) {
	started <- id
	time.Sleep(time.Second)
	fmt.Println("worker", id, "finished")
}

func main() {
	started := make(chan int)
	go worker(1, started)
	go worker(2, started)
	fmt.Println(<-started, <-started)
	fmt.Println("main exits first")
}
